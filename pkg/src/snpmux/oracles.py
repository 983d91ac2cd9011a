"""Exhaustive reference solvers and the matching-to-design reduction.

These exist to check the greedy heuristics, not to run at scale:
``brute_force_max_decodable`` tries every pool subset and representative
assignment, and ``brute_force_mim`` every edge subset of a bipartite
graph. ``reduce_matching_to_design`` maps a bipartite graph (max degree
3) to a design instance over an explicit probe list such that maximum
induced matchings correspond exactly to maximum decodable pool subsets
at redundancy 1; it doubles as a hard-instance generator since the
design problem inherits the matching problem's inapproximability.

In the reduction, each right vertex v gets a distinct A/T word x_v (v in
binary, A=0, T=1); the primer of a left vertex u is its neighbors' words
joined by C separators, and every extension set is {C, G}. C/G never
occur inside any x_v, so windows crossing a separator or an extension
match nothing: the primer's spectrum is exactly its neighbor set and no
probe is reachable only through extensions. The probe list stores
reverse complements of the x_v so that probe ids equal right-vertex
indices.
"""

import logging
from dataclasses import dataclass
from itertools import combinations, product

from .decodability import DesignResult, SelectedPool, is_strongly_r_decodable
from .dnaseq import reverse_complement
from .instance import Pool, Primer, ProblemInstance
from .probespace import ExplicitSpace

logger = logging.getLogger(__name__)

MIM_VERTEX_LIMIT = 24
DEFAULT_ENUMERATION_CAP = 2_000_000


class SizeLimitError(RuntimeError):
    """Raised when an exhaustive search would exceed its configured cap."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph on dense vertex sets 0..n_left-1 and 0..n_right-1."""

    n_left: int
    n_right: int
    edges: tuple

    def __post_init__(self):
        if self.n_left < 0 or self.n_right < 0:
            raise ValueError("vertex counts must be non-negative")
        edges = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        for u, v in edges:
            if not (0 <= u < self.n_left and 0 <= v < self.n_right):
                raise ValueError("edge (%d, %d) out of range" % (u, v))
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edges")
        object.__setattr__(self, "edges", edges)

    def left_neighbors(self, u):
        return sorted(v for uu, v in self.edges if uu == u)

    def degrees(self):
        dl = [0] * self.n_left
        dr = [0] * self.n_right
        for u, v in self.edges:
            dl[u] += 1
            dr[v] += 1
        return dl, dr


def brute_force_mim(graph):
    """Maximum induced matching size, by descending exhaustive search.

    An edge subset is an induced matching when its endpoints are all
    distinct and the graph has no edge between endpoints of two different
    chosen edges. Limited to |U| + |V| <= 24 vertices.
    """
    if graph.n_left + graph.n_right > MIM_VERTEX_LIMIT:
        raise SizeLimitError(
            "graph has %d vertices; induced matching search is capped at %d"
            % (graph.n_left + graph.n_right, MIM_VERTEX_LIMIT)
        )
    edges = graph.edges
    edge_set = set(edges)
    upper = min(graph.n_left, graph.n_right, len(edges))
    for k in range(upper, 0, -1):
        for combo in combinations(edges, k):
            if _is_induced_matching(combo, edge_set):
                return k
    return 0


def _is_induced_matching(chosen, edge_set):
    for i in range(len(chosen)):
        u1, v1 = chosen[i]
        for j in range(i + 1, len(chosen)):
            u2, v2 = chosen[j]
            if u1 == u2 or v1 == v2:
                return False
            if (u1, v2) in edge_set or (u2, v1) in edge_set:
                return False
    return True


def brute_force_max_decodable(instance, cap=DEFAULT_ENUMERATION_CAP):
    """Exhaustive maximum decodable subset: (size, witnessing DesignResult).

    Enumerates pool subsets by descending size and, within a subset,
    every representative assignment; the first assignment the
    decodability checker accepts wins. The total number of candidate
    assignments, prod(1 + pool size), must stay within cap.
    """
    pools = instance.pools
    r = instance.redundancy
    space = instance.space
    total = 1
    for pool in pools:
        total *= 1 + len(pool.primers)
        if total > cap:
            raise SizeLimitError(
                "instance admits more than %d candidate assignments" % cap
            )
    use_masks = space.size <= 4096
    if use_masks:
        spec_masks, ext_masks = _primer_masks(pools, space)
    for k in range(len(pools), 0, -1):
        for subset in combinations(range(len(pools)), k):
            choices = [range(len(pools[i].primers)) for i in subset]
            for assignment in product(*choices):
                if use_masks and not _mask_feasible(
                    subset, assignment, spec_masks, ext_masks, r
                ):
                    continue
                primers = [pools[i].primers[a] for i, a in zip(subset, assignment)]
                ok, witnesses = is_strongly_r_decodable(primers, r, space)
                if ok:
                    selected = tuple(
                        SelectedPool(pools[i].id, a, w)
                        for i, a, w in zip(subset, assignment, witnesses)
                    )
                    return k, DesignResult(selected, fingerprint=instance.fingerprint)
                if use_masks:
                    raise AssertionError(
                        "mask feasibility disagrees with decodability checker"
                    )
    return 0, DesignResult((), fingerprint=instance.fingerprint)


def _primer_masks(pools, space):
    spec_masks = []
    ext_masks = []
    for pool in pools:
        srow, erow = [], []
        for primer in pool.primers:
            nplus, nminus = space.primer_adjacency(primer.sequence, primer.extensions)
            smask = 0
            for x in nplus:
                smask |= 1 << x
            emask = smask
            for x in nminus:
                emask |= 1 << x
            srow.append(smask)
            erow.append(emask)
        spec_masks.append(srow)
        ext_masks.append(erow)
    return spec_masks, ext_masks


def _mask_feasible(subset, assignment, spec_masks, ext_masks, r):
    exts = [ext_masks[i][a] for i, a in zip(subset, assignment)]
    n = len(exts)
    prefix = [0] * (n + 1)
    for t in range(n):
        prefix[t + 1] = prefix[t] | exts[t]
    suffix = [0] * (n + 1)
    for t in range(n - 1, -1, -1):
        suffix[t] = suffix[t + 1] | exts[t]
    for t, (i, a) in enumerate(zip(subset, assignment)):
        others = prefix[t] | suffix[t + 1]
        own = spec_masks[i][a] & ~others
        if own.bit_count() < r:
            return False
    return True


@dataclass(frozen=True)
class ReductionOutput:
    """Reduced instance plus the right-vertex-to-word assignment."""

    instance: ProblemInstance
    probe_assignment: dict
    word_length: int


def reduce_matching_to_design(graph):
    """Encode induced matchings of a bipartite graph as a design instance.

    Requires every left vertex to have degree 1-3 and every right vertex
    degree >= 1. The returned instance has one single-primer pool per
    left vertex, redundancy 1, and probe ids equal to right-vertex
    indices; its maximum decodable subset size equals the graph's
    maximum induced matching size.
    """
    deg_left, deg_right = graph.degrees()
    for u, d in enumerate(deg_left):
        if not 1 <= d <= 3:
            raise ValueError("left vertex %d has degree %d; need 1-3" % (u, d))
    for v, d in enumerate(deg_right):
        if d < 1:
            raise ValueError("right vertex %d is isolated" % v)

    bits = max(1, (graph.n_right - 1).bit_length())
    words = {}
    for v in range(graph.n_right):
        words[v] = "".join("T" if (v >> (bits - 1 - t)) & 1 else "A" for t in range(bits))
    space = ExplicitSpace(
        [reverse_complement(words[v]) for v in range(graph.n_right)],
        descriptor="list:<reduction>",
    )
    pools = []
    for u in range(graph.n_left):
        seq = "C".join(words[v] for v in graph.left_neighbors(u))
        pools.append(Pool(id=u, primers=(Primer(seq, "CG", ".", u),)))
    instance = ProblemInstance(pools, space, redundancy=1)
    return ReductionOutput(instance=instance, probe_assignment=words, word_length=bits)
