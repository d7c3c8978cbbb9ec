from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import tdnet.routing as routing
from conftest import edge_disjoint, internally_disjoint, to_nx
from tdnet.bigraph import BipartiteGraph
from tdnet.construct import gen_circulant, gen_cycle, two_step
from tdnet.routing import EDGE, INTERNAL, PathSet
from tdnet.tdesign import build_td, canonical_td_3_2, find_isomorphism
from tdnet.verify import (
    MengerQuery,
    SweepReport,
    assert_disjoint,
    check_pathset,
    enumerate_td_3_2,
    enumerate_td_3_2_details,
    menger_count,
    sweep_theorem2,
    sweep_theorem3,
    sweep_theorem4,
    sweep_theorem5,
    td32_from_vectors,
)


def ps_of(g, paths, mode):
    return PathSet(tuple(paths), mode, len(paths), 99, g)


def test_disjoint_paths_pass_both_modes(c10):
    paths = [("Q0", "p0", "Q1", "p1", "Q2"), ("Q0", "p4", "Q4", "p3", "Q3", "p2", "Q2")]
    assert assert_disjoint(ps_of(c10, paths, INTERNAL)) == []
    assert assert_disjoint(ps_of(c10, paths, EDGE)) == []
    assert check_pathset(ps_of(c10, paths, INTERNAL)) == []


def test_shared_interior_node_only_fails_internal():
    g = BipartiteGraph(
        ["a", "x", "b"],
        ["S", "M1", "M2", "M3"],
        [("x", "S"), ("x", "M1"), ("x", "M2"), ("x", "M3"), ("a", "S"), ("a", "M1"), ("b", "M2"), ("b", "M3")],
    )
    p1 = ("S", "x", "M1")
    p2 = ("M2", "x", "M3")
    assert assert_disjoint(ps_of(g, [p1, p2], EDGE)) == []
    assert assert_disjoint(ps_of(g, [p1, p2], INTERNAL)) != []


def test_shared_edge_fails_edge_mode(c10):
    paths = [("Q0", "p0", "Q1"), ("Q0", "p0", "Q1")]
    assert assert_disjoint(ps_of(c10, paths, EDGE)) != []


def test_endpoint_as_interior_fails_internal(c10):
    paths = [("Q0", "p0", "Q1", "p1", "Q2"), ("Q1", "p0", "Q0")]
    assert assert_disjoint(ps_of(c10, paths, INTERNAL)) != []


@st.composite
def path_families(draw):
    g = gen_circulant(7, 3)
    paths = []
    for _ in range(draw(st.integers(1, 4))):
        a = draw(st.sampled_from(g.block_ids))
        b = draw(st.sampled_from(g.block_ids))
        blocked = draw(st.lists(st.sampled_from(g.elements()), max_size=3))
        p = g.shortest_path(a, b, blocked=[x for x in blocked if x not in (a, b)])
        if p is not None:
            paths.append(tuple(p.elements))
    return g, paths


@settings(max_examples=200, deadline=None)
@given(path_families())
def test_validators_match_definitions(fam):
    g, paths = fam
    if not paths:
        return
    assert (assert_disjoint(ps_of(g, paths, INTERNAL)) == []) == internally_disjoint(paths)
    assert (assert_disjoint(ps_of(g, paths, EDGE)) == []) == edge_disjoint(paths)


def test_check_pathset_catches_everything(c10):
    good = [("Q0", "p0", "Q1", "p1", "Q2"), ("Q0", "p4", "Q4", "p3", "Q3", "p2", "Q2")]
    assert check_pathset(PathSet(tuple(good), INTERNAL, 2, 6, c10), sources=["Q0"] * 2) == []
    assert check_pathset(PathSet(tuple(good), INTERNAL, 3, 6, c10)) != []
    assert check_pathset(PathSet(tuple(good), INTERNAL, 2, 5, c10)) != []
    assert check_pathset(PathSet(tuple(good), INTERNAL, 2, 6, c10), destinations=["Q1", "Q2"]) != []
    bad = [("Q0", "p3", "Q2")]
    assert check_pathset(PathSet(tuple(bad), INTERNAL, 1, 6, c10)) != []


def test_menger_c10_opposite(c10):
    assert menger_count(c10, "Q0", "Q2", INTERNAL) == 2
    assert menger_count(MengerQuery(c10, "Q0", "Q2", EDGE)) == 2


def test_menger_query_validation(c10):
    with pytest.raises(ValueError):
        MengerQuery(c10, "Q0", "Q0")
    with pytest.raises(ValueError):
        MengerQuery(c10, "Q0", "zz")


def test_menger_canonical_brute_force():
    g = canonical_td_3_2().graph
    paths = [tuple(p) for p in nx.all_simple_paths(to_nx(g), "B1", "B4")]
    best = 0
    for r in range(1, len(paths) + 1):
        if any(internally_disjoint(c) for c in itertools.combinations(paths, r)):
            best = r
    assert menger_count(g, "B1", "B4", INTERNAL) == best == 3


@pytest.mark.parametrize("base,t", [(gen_cycle(5), build_td(2, 3)), (gen_circulant(9, 3), build_td(3, 3))])
def test_menger_matches_networkx(base, t):
    h = two_step(base, t)
    g = h.graph
    ng = to_nx(g)
    blocks = list(g.block_ids)
    for a, b in list(itertools.combinations(blocks, 2))[::17]:
        m = menger_count(g, a, b, INTERNAL)
        assert m == nx.node_connectivity(ng, a, b)
        assert m <= t.delta
        assert menger_count(g, a, b, EDGE) == nx.edge_connectivity(ng, a, b)


def test_enumeration():
    info = enumerate_td_3_2_details()
    assert info["raw"] == 8**4
    assert enumerate_td_3_2() == 1 == len(info["classes"])
    assert info["valid"]
    for vecs in info["valid"]:
        assert find_isomorphism(td32_from_vectors(vecs), canonical_td_3_2()) is not None


def test_sweep_theorem2_small(h_c10):
    rep = sweep_theorem2(h_c10)
    assert rep.pairs_tested == 45 * 44
    assert rep.passed and rep.failures == []
    assert sum(rep.length_histogram.values()) == 2 * 45 * 44


def test_sweep_theorem2_parallel_matches_serial(h_circ93):
    pairs = [(a, b) for a, b in itertools.permutations(h_circ93.graph.block_ids[:30], 2)][:300]
    s = sweep_theorem2(h_circ93, pairs=pairs)
    p = sweep_theorem2(h_circ93, pairs=pairs, jobs=2)
    assert s.passed and p.passed
    assert s.length_histogram == p.length_histogram and s.counts == p.counts


def test_sweep_fault_injection(h_c10, monkeypatch):
    real = routing.one_to_one_any

    def broken(h, b1, b2, *, check=True):
        ps = real(h, b1, b2, check=check)
        first = list(ps.paths[0].elements)
        if len(first) >= 5:
            # reroute through the other path's first interior element
            first[1] = ps.paths[1].elements[1]
        return PathSet((tuple(first),) + ps.paths[1:], ps.mode, ps.claimed_count, ps.length_bound, ps.host, ps.info)

    monkeypatch.setattr(routing, "one_to_one_any", broken)
    pairs = [("Q0|U0_0", "Q2|U1_1"), ("Q1|U0_0", "Q3|U2_2")]
    rep = sweep_theorem2(h_c10, pairs=pairs)
    assert not rep.passed
    assert all(f["witness"] for f in rep.failures)


def test_sweep_theorem5_seeded(h_circ93):
    a = sweep_theorem5(h_circ93, 50, seed=9)
    b = sweep_theorem5(h_circ93, 50, seed=9)
    assert a.passed and a.to_dict()["length_histogram"] == b.to_dict()["length_histogram"]
    assert a.seed == 9


def test_sweeps_3_and_4():
    t = build_td(3, 4)
    r3 = sweep_theorem3(t, 200, seed=1)
    r4 = sweep_theorem4(t, 200, seed=1)
    assert r3.passed and r4.passed
    assert r3.counts["nodes-only"] >= 60
    assert max(r4.length_histogram) <= 3


def test_report_dict():
    rep = SweepReport("x", 2)
    rep.merge({"query": ["a", "b"], "problems": ["boom"], "runtime": 0.5, "lengths": [2, 2]})
    d = rep.to_dict()
    assert d["passed"] is False and d["length_histogram"] == {"2": 2}
