"""Decodability checks and independent design verification.

A set of selected representative primers is strongly r-decodable when
every one of them keeps at least r informative probes: probes in the
spectrum of its unextended sequence that no other selected primer's
extended products can reach. Each such probe reports the extending base
of exactly one primer, so r independent readouts per SNP survive
cross-hybridization.

``verify_design`` recomputes every spectrum from scratch and shares no
state with the solvers, so it can be used as an acceptance gate for any
claimed design.
"""

import logging
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

# violation kinds emitted by verify_design
KIND_STRUCTURE = "structure"
KIND_FINGERPRINT = "fingerprint"
KIND_INFORMATIVE = "informative-count"
KIND_WITNESS_COUNT = "witness-count"
KIND_WITNESS_MEMBER = "witness-membership"
KIND_WITNESS_CROSS = "witness-cross"
KIND_WITNESS_OVERLAP = "witness-overlap"


@dataclass(frozen=True)
class SelectedPool:
    """One selected pool: which primer represents it and its witnesses."""

    pool_id: int
    primer_index: int
    witnesses: tuple


@dataclass(frozen=True)
class DesignResult:
    """A claimed multiplexed design: selections with witness probes.

    Args:
        selected: SelectedPool entries, sorted by pool id.
        fingerprint: sha256 of the instance this was computed for, or None.
        pruned_empty: primers skipped because their unextended spectrum
            was empty (among candidates the solver evaluated).
    """

    selected: tuple
    fingerprint: str = None
    pruned_empty: int = 0

    def __post_init__(self):
        entries = tuple(sorted(self.selected, key=lambda s: s.pool_id))
        object.__setattr__(self, "selected", entries)

    @property
    def size(self):
        return len(self.selected)

    def pool_ids(self):
        return [s.pool_id for s in self.selected]

    def to_lines(self):
        """Data lines: pool_id <TAB> primer_index <TAB> witness ids (comma-joined)."""
        return [
            "%d\t%d\t%s" % (s.pool_id, s.primer_index, ",".join(str(w) for w in s.witnesses))
            for s in self.selected
        ]


def parse_design_lines(text):
    """Parse DesignResult data lines; '#' comments and blanks are skipped."""
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError("line %d: expected 3 tab-separated fields" % line_no)
        try:
            pool_id = int(fields[0])
            primer_index = int(fields[1])
            witnesses = tuple(int(w) for w in fields[2].split(",")) if fields[2] else ()
        except ValueError:
            raise ValueError("line %d: malformed design entry %r" % (line_no, raw))
        entries.append(SelectedPool(pool_id, primer_index, tuple(sorted(witnesses))))
    return entries


def informative_probes(primer, others, space):
    """Probes of primer's unextended spectrum reached by no other primer.

    Args:
        primer: the candidate representative.
        others: the other selected representatives; their extended
            spectra mask probes.
        space: the probe space.

    Returns a set of probe ids.
    """
    own = set(space.spectrum(primer.sequence))
    for other in others:
        if not own:
            break
        own -= space.extended_spectrum(other.sequence, other.extensions)
    return own


def is_strongly_r_decodable(primers, r, space):
    """Check that every primer keeps >= r informative probes.

    Coverage is counted once across all extended spectra, so the check is
    linear in total spectrum size. A probe is informative for the single
    primer covering it when that primer reaches it unextended.

    Returns (True, witness_sets) with one sorted tuple of exactly the r
    lowest informative probe ids per primer, or (False, None).
    """
    if r < 1:
        raise ValueError("redundancy must be >= 1, got %r" % (r,))
    specs = []
    cover = {}
    for primer in primers:
        nplus, nminus = space.primer_adjacency(primer.sequence, primer.extensions)
        specs.append(nplus)
        for x in nplus:
            cover[x] = cover.get(x, 0) + 1
        for x in nminus:
            cover[x] = cover.get(x, 0) + 1
    witnesses = []
    for nplus in specs:
        own = [x for x in nplus if cover[x] == 1]
        if len(own) < r:
            return False, None
        witnesses.append(tuple(own[:r]))
    return True, witnesses


@dataclass(frozen=True)
class Violation:
    pool_id: int  # -1 for violations not tied to one pool
    kind: str
    detail: str

    def to_line(self):
        return "%d\t%s\t%s" % (self.pool_id, self.kind, self.detail)


@dataclass
class VerificationReport:
    violations: list = field(default_factory=list)
    checked_pools: int = 0

    @property
    def ok(self):
        return not self.violations

    def to_text(self):
        lines = [v.to_line() for v in self.violations]
        lines.append("# checked_pools=%d violations=%d" % (self.checked_pools, len(self.violations)))
        return "\n".join(lines) + "\n"


def verify_design(result, instance):
    """Independently verify a DesignResult against an instance.

    All spectra are recomputed from the instance; nothing is trusted from
    the result beyond the claims themselves. Every violation found is
    reported: structural problems (unknown pools, bad primer indices,
    out-of-range probe ids, duplicate selections), informative-probe
    counts below the instance redundancy, and witness sets that are too
    small, outside their primer's spectrum, reachable by another selected
    primer, or overlapping another pool's witnesses.
    """
    space = instance.space
    r = instance.redundancy
    report = VerificationReport(checked_pools=len(result.selected))
    add = report.violations.append

    if result.fingerprint and result.fingerprint != instance.fingerprint:
        add(Violation(-1, KIND_FINGERPRINT,
                      "result fingerprint %s does not match instance %s"
                      % (result.fingerprint[:12], instance.fingerprint[:12])))

    seen_pools = {}
    valid = []  # (entry, primer)
    for entry in result.selected:
        if entry.pool_id in seen_pools:
            add(Violation(entry.pool_id, KIND_STRUCTURE, "pool selected more than once"))
            continue
        seen_pools[entry.pool_id] = entry
        try:
            pool = instance.pool_by_id(entry.pool_id)
        except KeyError:
            add(Violation(entry.pool_id, KIND_STRUCTURE, "pool id not in instance"))
            continue
        if not 0 <= entry.primer_index < len(pool.primers):
            add(Violation(entry.pool_id, KIND_STRUCTURE,
                          "primer index %d out of range for pool of %d"
                          % (entry.primer_index, len(pool.primers))))
            continue
        bad_probe = next((w for w in entry.witnesses if not 0 <= w < space.size), None)
        if bad_probe is not None:
            add(Violation(entry.pool_id, KIND_STRUCTURE,
                          "witness probe id %d outside probe space of size %d"
                          % (bad_probe, space.size)))
            continue
        valid.append((entry, pool.primers[entry.primer_index]))

    # recompute coverage over the valid selections
    cover = {}
    specs = []
    for entry, primer in valid:
        nplus, nminus = space.primer_adjacency(primer.sequence, primer.extensions)
        spec = set(nplus)
        specs.append(spec)
        for x in nplus:
            cover[x] = cover.get(x, 0) + 1
        for x in nminus:
            cover[x] = cover.get(x, 0) + 1

    witness_owner = {}
    for (entry, primer), spec in zip(valid, specs):
        informative = sum(1 for x in spec if cover[x] == 1)
        if informative < r:
            add(Violation(entry.pool_id, KIND_INFORMATIVE,
                          "%d informative probe(s), need %d" % (informative, r)))
        if len(entry.witnesses) < r:
            add(Violation(entry.pool_id, KIND_WITNESS_COUNT,
                          "%d witness(es), need %d" % (len(entry.witnesses), r)))
        for w in entry.witnesses:
            if w not in spec:
                add(Violation(entry.pool_id, KIND_WITNESS_MEMBER,
                              "witness %d not in representative's spectrum" % w))
            elif cover[w] > 1:
                add(Violation(entry.pool_id, KIND_WITNESS_CROSS,
                              "witness %d reachable by another selected pool" % w))
            prev = witness_owner.get(w)
            if prev is not None and prev != entry.pool_id:
                add(Violation(entry.pool_id, KIND_WITNESS_OVERLAP,
                              "witness %d also claimed by pool %d" % (w, prev)))
            else:
                witness_owner[w] = entry.pool_id
    return report
