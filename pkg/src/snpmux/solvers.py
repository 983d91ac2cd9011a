"""Greedy selection of maximum decodable pool subsets.

Three heuristics, all returning designs that pass independent
verification by construction:

* ``seq``: scan pools in order and keep a pool whenever its first
  acceptable primer leaves every selection with >= r informative probes.
* ``minprimer``: repeatedly select a minimum-degree live primer from the
  hybridization graph, certify it with its r smallest-degree spectrum
  probes, and remove every primer that could mask those witnesses.
* ``minprobe``: like minprimer, but first choose a minimum-degree probe
  and represent it by its minimum-degree unextended primer, favoring
  sparsely contested regions of the array.

Degrees only decrease, so a bucket queue with lazy deletion gives
near-constant-time minimum extraction. Ties always break toward the
lowest index, which makes every run deterministic.

The removal rules maintain two invariants on the live graph: a primer
stays only while it has >= r live unextended-spectrum probes, and a
probe stays only while some live primer reaches it unextended.
"""

import logging
from dataclasses import dataclass
from heapq import heappush, heappop

from .decodability import DesignResult, SelectedPool
from .instance import build_graph

logger = logging.getLogger(__name__)

ALGORITHMS = ("seq", "minprimer", "minprobe")
DEGREE_MODES = ("total", "positive")


@dataclass(frozen=True)
class SolverConfig:
    """Solver choice plus how vertex degree is counted.

    degree_mode "total" counts both spectrum and extension-only edges
    when picking minimum-degree vertices; "positive" counts only the
    unextended-spectrum side. It affects minprimer/minprobe only.
    """

    algorithm: str = "seq"
    degree_mode: str = "total"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError("algorithm must be one of %s, got %r" % (ALGORITHMS, self.algorithm))
        if self.degree_mode not in DEGREE_MODES:
            raise ValueError("degree_mode must be one of %s, got %r" % (DEGREE_MODES, self.degree_mode))


def solve(instance, config=None):
    """Run the configured solver on an instance."""
    config = config or SolverConfig()
    if config.algorithm == "seq":
        return sequential_greedy(instance)
    if config.algorithm == "minprimer":
        return min_primer_greedy(instance, degree_mode=config.degree_mode)
    return min_probe_greedy(instance, degree_mode=config.degree_mode)


def sequential_greedy(instance):
    """First-fit scan: keep a pool if some primer of it fits the selection.

    A candidate is accepted when it has >= r probes nobody selected can
    reach, and accepting it leaves every earlier selection with >= r
    informative probes. Bookkeeping is incremental: per-probe coverage
    counts plus the owner of every currently-informative probe.
    """
    space = instance.space
    r = instance.redundancy
    cover = {}  # probe id -> number of selected extended spectra covering it
    informative_for = {}  # probe id -> selection slot it is informative for
    counts = []  # informative probes per selection slot
    chosen = []  # (pool_id, primer_index, own spectrum set)
    pruned_empty = 0
    for pool in instance.pools:
        for primer_index, primer in enumerate(pool.primers):
            nplus, nminus = space.primer_adjacency(primer.sequence, primer.extensions)
            if not nplus:
                pruned_empty += 1
                continue
            gain = sum(1 for x in nplus if x not in cover)
            if gain < r:
                continue
            # would any earlier selection drop below r informative probes?
            loss = {}
            ok = True
            for x in nplus:
                slot = informative_for.get(x)
                if slot is not None:
                    loss[slot] = loss.get(slot, 0) + 1
            for x in nminus:
                slot = informative_for.get(x)
                if slot is not None:
                    loss[slot] = loss.get(slot, 0) + 1
            for slot, lost in loss.items():
                if counts[slot] - lost < r:
                    ok = False
                    break
            if not ok:
                continue
            # accept: update coverage and informative ownership
            slot = len(chosen)
            npset = set(nplus)
            for x in nplus:
                c = cover.get(x, 0)
                cover[x] = c + 1
                if c == 0:
                    informative_for[x] = slot
                else:
                    owner = informative_for.pop(x, None)
                    if owner is not None:
                        counts[owner] -= 1
            for x in nminus:
                c = cover.get(x, 0)
                cover[x] = c + 1
                if c:
                    owner = informative_for.pop(x, None)
                    if owner is not None:
                        counts[owner] -= 1
            counts.append(gain)
            chosen.append((pool.id, primer_index, npset))
            break
    selected = []
    for slot, (pool_id, primer_index, npset) in enumerate(chosen):
        own = sorted(x for x in npset if informative_for.get(x) == slot)
        selected.append(SelectedPool(pool_id, primer_index, tuple(own[:r])))
    return DesignResult(tuple(selected), fingerprint=instance.fingerprint,
                        pruned_empty=pruned_empty)


class _BucketQueue:
    """Min-queue over (key, index) with lazy staleness, for shrinking keys.

    Every live vertex always has an entry at its current key: each key
    decrease pushes a fresh entry, and pop skips entries whose stored
    bucket no longer matches. Buckets are heaps so ties pop by index.
    """

    def __init__(self):
        self.buckets = {}
        self.floor = 0

    def fill(self, pairs):
        """Bulk-load (key, index) pairs given in increasing index order."""
        buckets = self.buckets
        for key, idx in pairs:
            buckets.setdefault(key, []).append(idx)  # ascending: valid heap
        self.floor = 0

    def push(self, key, idx):
        heappush(self.buckets.setdefault(key, []), idx)
        if key < self.floor:
            self.floor = key

    def pop(self, current_key, alive):
        """Smallest (key, index) among live entries, or None if exhausted."""
        buckets = self.buckets
        k = self.floor
        while buckets:
            bucket = buckets.get(k)
            if bucket:
                idx = heappop(bucket)
                if alive[idx] and current_key(idx) == k:
                    self.floor = k
                    return idx
                continue
            if bucket is not None:
                del buckets[k]
            k += 1
        return None


def remove_primer(g, p):
    """Delete live primer p; cascades removals to keep graph invariants."""
    if not g.alive_p[p]:
        raise ValueError("primer %d is not live" % p)
    _cascade(g, [p])


def remove_probe(g, v):
    """Delete live probe vertex v; cascades removals to keep invariants."""
    if not g.alive_x[v]:
        raise ValueError("probe vertex %d is not live" % v)
    _cascade(g, [~v])


def _cascade(g, stack, primer_queue=None, probe_queue=None, positive=False):
    """Process deletions until the degree invariants hold again.

    Stack entries: p >= 0 deletes primer p, ~v < 0 deletes probe vertex v.
    A primer is deleted when its live unextended spectrum drops below r;
    a probe when no live primer reaches it unextended. Entries for
    already-dead vertices are skipped, so duplicates are harmless.
    """
    r = g.r
    alive_p, alive_x = g.alive_p, g.alive_x
    dp_plus, dp_minus = g.dp_plus, g.dp_minus
    dx_plus, dx_minus = g.dx_plus, g.dx_minus
    pn_plus, pn_minus = g.pn_plus, g.pn_minus
    xn_plus, xn_minus = g.xn_plus, g.xn_minus
    push_p = primer_queue.push if primer_queue else None
    push_x = probe_queue.push if probe_queue else None
    pop = stack.pop
    while stack:
        entry = pop()
        if entry >= 0:
            p = entry
            if not alive_p[p]:
                continue
            alive_p[p] = 0
            g.live_primers -= 1
            for v in pn_plus[p]:
                if alive_x[v]:
                    d = dx_plus[v] - 1
                    dx_plus[v] = d
                    if d == 0:
                        stack.append(~v)
                    elif push_x is not None:
                        push_x(d if positive else d + dx_minus[v], v)
            for v in pn_minus[p]:
                if alive_x[v]:
                    dx_minus[v] -= 1
                    if push_x is not None and not positive:
                        push_x(dx_plus[v] + dx_minus[v], v)
        else:
            v = ~entry
            if not alive_x[v]:
                continue
            alive_x[v] = 0
            for p in xn_plus[v]:
                if alive_p[p]:
                    d = dp_plus[p] - 1
                    dp_plus[p] = d
                    if d < r:
                        stack.append(p)
                    elif push_p is not None:
                        push_p(d if positive else d + dp_minus[p], p)
            for p in xn_minus[v]:
                if alive_p[p]:
                    dp_minus[p] -= 1
                    if push_p is not None and not positive:
                        push_p(dp_plus[p] + dp_minus[p], p)


def _initial_prune(g):
    """Enforce the invariants on the freshly built graph."""
    stack = [p for p in range(g.n_primers) if g.alive_p[p] and g.dp_plus[p] < g.r]
    stack.extend(~v for v in range(g.n_probes) if g.alive_x[v] and g.dx_plus[v] == 0)
    if stack:
        _cascade(g, stack)


def _select_and_clean(g, p, selected, primer_queue, probe_queue, positive):
    """Select primer p as its pool's representative and clean its region.

    The selected primer is retired, not removed: it never enters a
    removal sweep, but it still counts toward its probes' live degrees
    until the step ends, exactly as if it left the graph only once all
    its edges are gone. The step: delete pool mates; freeze the r
    smallest-degree live spectrum probes as witnesses (degree order at
    selection time); delete every other primer reaching a witness; then
    delete the remaining probes adjacent to p.
    """
    alive_p, alive_x = g.alive_p, g.alive_x
    dx_plus, dx_minus = g.dx_plus, g.dx_minus
    r = g.r
    pool_pos = g.primer_pool[p]

    alive_p[p] = 0  # retired
    g.live_primers -= 1

    stack = [q for q in g.pool_primers[pool_pos] if q != p and alive_p[q]]
    if stack:
        _cascade(g, stack, primer_queue, probe_queue, positive)

    live_np = [v for v in g.pn_plus[p] if alive_x[v]]
    assert len(live_np) >= r, "selected primer lost its witnesses"
    if positive:
        live_np.sort(key=lambda v: (dx_plus[v], v))
    else:
        live_np.sort(key=lambda v: (dx_plus[v] + dx_minus[v], v))
    witnesses = live_np[:r]
    for v in witnesses:
        alive_x[v] = 0  # consumed; no sweep may delete another witness
    stack = []
    for v in witnesses:
        stack.extend(q for q in g.xn_plus[v] if alive_p[q])
        stack.extend(q for q in g.xn_minus[v] if alive_p[q])
    if stack:
        _cascade(g, stack, primer_queue, probe_queue, positive)

    stack = [~v for v in g.pn_plus[p] if alive_x[v]]
    stack.extend(~v for v in g.pn_minus[p] if alive_x[v])
    if stack:
        _cascade(g, stack, primer_queue, probe_queue, positive)

    pool = g.pools[pool_pos]
    primer_index = g.pool_primers[pool_pos].index(p)
    probe_ids = g.probe_ids
    witness_ids = tuple(sorted(probe_ids[v] for v in witnesses))
    selected.append(SelectedPool(pool.id, primer_index, witness_ids))


def min_primer_greedy(instance, degree_mode="total"):
    """Repeatedly select the minimum-degree live primer."""
    positive = degree_mode == "positive"
    g = build_graph(instance)
    _initial_prune(g)
    dp_plus, dp_minus = g.dp_plus, g.dp_minus
    queue = _BucketQueue()
    if positive:
        queue.fill((dp_plus[p], p) for p in range(g.n_primers) if g.alive_p[p])
        key = lambda p: dp_plus[p]
    else:
        queue.fill((dp_plus[p] + dp_minus[p], p) for p in range(g.n_primers) if g.alive_p[p])
        key = lambda p: dp_plus[p] + dp_minus[p]
    selected = []
    alive_p = g.alive_p
    while g.live_primers:
        p = queue.pop(key, alive_p)
        assert p is not None, "live primer missing from queue"
        _select_and_clean(g, p, selected, queue, None, positive)
    return DesignResult(tuple(selected), fingerprint=instance.fingerprint,
                        pruned_empty=g.pruned_empty)


def min_probe_greedy(instance, degree_mode="total"):
    """Select the minimum-degree probe's minimum-degree unextended primer."""
    positive = degree_mode == "positive"
    g = build_graph(instance)
    _initial_prune(g)
    dp_plus, dp_minus = g.dp_plus, g.dp_minus
    dx_plus, dx_minus = g.dx_plus, g.dx_minus
    queue = _BucketQueue()
    if positive:
        queue.fill((dx_plus[v], v) for v in range(g.n_probes) if g.alive_x[v])
        key = lambda v: dx_plus[v]
        pkey = lambda q: dp_plus[q]
    else:
        queue.fill((dx_plus[v] + dx_minus[v], v) for v in range(g.n_probes) if g.alive_x[v])
        key = lambda v: dx_plus[v] + dx_minus[v]
        pkey = lambda q: dp_plus[q] + dp_minus[q]
    selected = []
    alive_p, alive_x = g.alive_p, g.alive_x
    while g.live_primers:
        v = queue.pop(key, alive_x)
        assert v is not None, "live probe missing from queue"
        p = min((q for q in g.xn_plus[v] if alive_p[q]), key=lambda q: (pkey(q), q))
        _select_and_clean(g, p, selected, None, queue, positive)
    return DesignResult(tuple(selected), fingerprint=instance.fingerprint,
                        pruned_empty=g.pruned_empty)
