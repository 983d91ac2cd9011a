import random

import pytest

from snpmux.decodability import is_strongly_r_decodable, verify_design
from snpmux.instance import Pool, Primer, ProblemInstance, build_graph
from snpmux.oracles import brute_force_max_decodable
from snpmux.probespace import KmerSpace
from snpmux.solvers import (
    ALGORITHMS,
    SolverConfig,
    min_primer_greedy,
    min_probe_greedy,
    remove_primer,
    remove_probe,
    sequential_greedy,
    solve,
)


def _pool(pid, *specs):
    primers = tuple(
        Primer(seq, ext, strand, pid) for seq, ext, strand in specs
    )
    return Pool(pid, primers)


def _instance(pools, k=2, r=1):
    return ProblemInstance(pools, KmerSpace(k), r)


def _random_instance(rng, n_pools, k, r, max_len=8):
    pools = []
    for pid in range(n_pools):
        primers = []
        for j in range(rng.randint(1, 2)):
            seq = "".join(rng.choice("ACGT") for _ in range(rng.randint(k, max_len)))
            ext = "".join(sorted(rng.sample("ACGT", rng.randint(1, 4))))
            primers.append(Primer(seq, ext, "+-"[j], pid))
        pools.append(Pool(pid, tuple(primers)))
    return ProblemInstance(pools, KmerSpace(k), r)


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(algorithm="magic")
    with pytest.raises(ValueError):
        SolverConfig(degree_mode="sideways")


def test_duplicate_pools_conflict():
    # pools 0 and 1 share one primer sequence, so only one of them fits;
    # pool 2 lives in a different corner of the probe space
    pools = [
        _pool(0, ("AAAA", "C", ".")),
        _pool(1, ("AAAA", "C", ".")),
        _pool(2, ("CCCC", "A", ".")),
    ]
    inst = _instance(pools)
    for alg in ALGORITHMS:
        res = solve(inst, SolverConfig(algorithm=alg))
        assert res.pool_ids() == [0, 2], alg
        assert verify_design(res, inst).ok, alg


def test_seq_falls_back_to_second_primer():
    pools = [
        _pool(0, ("AAAA", "C", ".")),
        _pool(1, ("AAAA", "C", "+"), ("CCCC", "A", "-")),
    ]
    inst = _instance(pools)
    res = sequential_greedy(inst)
    assert res.pool_ids() == [0, 1]
    entry = res.selected[1]
    assert entry.primer_index == 1  # the first primer conflicts with pool 0
    assert verify_design(res, inst).ok


def test_selected_primers_are_strongly_decodable():
    rng = random.Random(41)
    for trial in range(30):
        inst = _random_instance(rng, rng.randint(1, 10), 2, rng.randint(1, 2))
        for alg in ALGORITHMS:
            res = solve(inst, SolverConfig(algorithm=alg))
            assert verify_design(res, inst).ok, alg
            reps = [
                inst.pool_by_id(e.pool_id).primers[e.primer_index]
                for e in res.selected
            ]
            if reps:
                ok, _ = is_strongly_r_decodable(reps, inst.redundancy, inst.space)
                assert ok, alg


def test_never_beats_brute_force():
    rng = random.Random(43)
    for trial in range(20):
        inst = _random_instance(rng, rng.randint(2, 7), 2, rng.randint(1, 2), max_len=6)
        best, _ = brute_force_max_decodable(inst)
        for alg in ALGORITHMS:
            assert solve(inst, SolverConfig(algorithm=alg)).size <= best, alg


def test_witness_counts_match_redundancy():
    rng = random.Random(47)
    inst = _random_instance(rng, 12, 2, 2)
    for alg in ALGORITHMS:
        res = solve(inst, SolverConfig(algorithm=alg))
        for entry in res.selected:
            assert len(entry.witnesses) == 2
            assert list(entry.witnesses) == sorted(entry.witnesses)


def test_solvers_are_deterministic():
    rng = random.Random(53)
    inst = _random_instance(rng, 25, 3, 1)
    for alg in ALGORITHMS:
        for mode in ("total", "positive"):
            cfg = SolverConfig(algorithm=alg, degree_mode=mode)
            assert solve(inst, cfg) == solve(inst, cfg), (alg, mode)


def test_degree_modes_both_verify():
    rng = random.Random(59)
    inst = _random_instance(rng, 30, 2, 1)
    for alg in ("minprimer", "minprobe"):
        for mode in ("total", "positive"):
            res = solve(inst, SolverConfig(algorithm=alg, degree_mode=mode))
            assert verify_design(res, inst).ok, (alg, mode)


def test_empty_and_hopeless_instances():
    empty = _instance([])
    for alg in ALGORITHMS:
        assert solve(empty, SolverConfig(algorithm=alg)).size == 0
    # a primer shorter than k has no spectrum at all
    hopeless = ProblemInstance([_pool(0, ("AC", "G", "."))], KmerSpace(3), 1)
    for alg in ALGORITHMS:
        res = solve(hopeless, SolverConfig(algorithm=alg))
        assert res.size == 0
        assert res.pruned_empty == 1


def test_result_carries_fingerprint():
    inst = _instance([_pool(0, ("AAAA", "C", "."))])
    for alg in ALGORITHMS:
        assert solve(inst, SolverConfig(algorithm=alg)).fingerprint == inst.fingerprint


def _conflict_graph():
    # ACG/T and CGT/A share probe CG (id 6); ACG also owns GT (11)
    pools = [
        _pool(0, ("ACG", "T", ".")),
        _pool(1, ("CGT", "A", ".")),
    ]
    return build_graph(_instance(pools))


def test_remove_primer_cascades_to_orphan_probes():
    g = _conflict_graph()
    # probe ids [1, 6, 11, 12]: removing primer 0 orphans probe 11
    remove_primer(g, 0)
    assert g.alive_p[0] == 0
    assert g.live_primers == 1
    v11 = g.probe_ids.index(11)
    assert g.alive_x[v11] == 0
    v6 = g.probe_ids.index(6)
    assert g.alive_x[v6] == 1
    assert g.dx_plus[v6] == 1
    with pytest.raises(ValueError):
        remove_primer(g, 0)


def test_remove_probe_cascades_to_starved_primers():
    g = _conflict_graph()
    v6 = g.probe_ids.index(6)
    v11 = g.probe_ids.index(11)
    remove_probe(g, v6)
    # primer 1 kept probe 1, primer 0 kept probe 11: both still live
    assert g.live_primers == 2
    remove_probe(g, v11)
    # primer 0 drops below r=1 and dies; its minus-side edge goes too
    assert g.alive_p[0] == 0
    assert g.live_primers == 1
    with pytest.raises(ValueError):
        remove_probe(g, v11)


def test_removal_order_does_not_matter():
    rng = random.Random(61)
    for trial in range(15):
        inst = _random_instance(rng, 8, 2, 1)
        g1 = build_graph(inst)
        g2 = build_graph(inst)
        live_probes = [v for v in range(g1.n_probes) if g1.alive_x[v]]
        picks = rng.sample(live_probes, min(3, len(live_probes)))
        for v in picks:
            if g1.alive_x[v]:
                remove_probe(g1, v)
        for v in reversed(picks):
            if g2.alive_x[v]:
                remove_probe(g2, v)
        assert bytes(g1.alive_p) == bytes(g2.alive_p)
        assert bytes(g1.alive_x) == bytes(g2.alive_x)
        assert g1.dp_plus == g2.dp_plus
        assert g1.dx_plus == g2.dx_plus


def test_min_variants_match_direct_calls():
    rng = random.Random(67)
    inst = _random_instance(rng, 15, 2, 1)
    assert solve(inst, SolverConfig(algorithm="minprimer")) == min_primer_greedy(inst)
    assert solve(inst, SolverConfig(algorithm="minprobe")) == min_probe_greedy(inst)
