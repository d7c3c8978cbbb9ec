from __future__ import annotations

import itertools

import networkx as nx
import pytest

from conftest import to_nx
from tdnet import construct
from tdnet.bigraph import degree_profile, diameter, line_diameter
from tdnet.construct import (
    ConstructionError,
    PreconditionError,
    check_theorem1,
    double_cover_join,
    gen_circulant,
    gen_cycle,
    iterate,
    three_step,
    two_step,
)
from tdnet.tdesign import build_td


def side_iso(g1, g2) -> bool:
    gm = nx.algorithms.isomorphism.GraphMatcher(
        to_nx(g1), to_nx(g2), node_match=lambda a, b: a["side"] == b["side"]
    )
    return gm.is_isomorphic()


def test_two_step_c10_counts(h_c10):
    g = h_c10.graph
    p = degree_profile(g)
    assert (g.n, g.e, p.d, p.delta, p.regular, p.uniform) == (15, 45, 6, 2, True, True)
    assert line_diameter(g) == 4


def test_three_step_c10(hstar_c10, h_c10):
    g = hstar_c10.graph
    p = degree_profile(g)
    assert (g.n, g.e, p.d, p.delta) == (45, 15, 2, 6)
    assert diameter(g) == line_diameter(h_c10.graph)
    assert hstar_c10.two_step_graph == h_c10.graph


def test_rank_mismatch_rejected(c10):
    with pytest.raises(ConstructionError):
        two_step(c10, build_td(3, 3))


def test_irregular_base_rejected():
    from tdnet.bigraph import BipartiteGraph

    g = BipartiteGraph(["a", "b"], ["X", "Y"], [("a", "X"), ("a", "Y"), ("b", "Y")])
    with pytest.raises(ConstructionError):
        two_step(g, build_td(2, 3))


@pytest.mark.parametrize(
    "base,t",
    [(gen_cycle(5), build_td(2, 3)), (gen_circulant(9, 3), build_td(3, 3)), (double_cover_join(gen_cycle(5)), build_td(3, 2))],
)
def test_copies_are_designs_and_partition_edges(base, t):
    h = two_step(base, t)
    g = h.graph
    seen_blocks = set()
    seen_edges = set()
    for q in base.block_ids:
        roots = h.roots_of_copy[q]
        nodes = [x for p in roots for x in h.group(p)]
        blocks = [b for b in g.block_ids if h.origin_of_block[b][0] == q]
        assert len(blocks) == t.k**2
        assert not seen_blocks & set(blocks)
        seen_blocks |= set(blocks)
        sub = nx.Graph(to_nx(g).subgraph(nodes + blocks))
        edges = {frozenset(e) for e in sub.edges}
        assert not seen_edges & edges
        seen_edges |= edges
        tg = to_nx(t.graph)
        gm = nx.algorithms.isomorphism.GraphMatcher(sub, tg, node_match=lambda a, b: a["side"] == b["side"])
        assert gm.is_isomorphic()
        # provenance maps agree with the incidences
        for b in blocks:
            _, u = h.origin_of_block[b]
            mapped = {h.from_design_node(q, x) for x in t.graph.neighbours(u)}
            assert mapped == set(g.neighbours(b))
    assert seen_edges == {frozenset(e) for e in g.edges}


def test_iterate_one_round_equals_two_step(c10):
    t = build_td(2, 3)
    assert iterate(c10, t, 1).graph == two_step(c10, t).graph


def test_iterate_counts_and_line_diameter():
    base = gen_cycle(6)
    t = build_td(2, 3)
    h = iterate(base, t, 2)
    p = degree_profile(h.graph)
    assert (h.graph.n, h.graph.e, p.d, p.delta) == (6 * 9, 6 * 81, 2 * 9, 2)
    assert line_diameter(h.graph) == line_diameter(base) == 6


def test_iterated_small_row_sizes():
    h = iterate(gen_circulant(80, 4), build_td(4, 4), 2, three=True)
    assert (h.graph.n, h.graph.e) == (20480, 1280)


def test_generators():
    assert side_iso(gen_circulant(5, 2), gen_cycle(5))
    p = degree_profile(gen_circulant(9, 3))
    assert (p.d, p.delta) == (3, 3)
    assert line_diameter(gen_cycle(3)) == 2
    with pytest.raises(ConstructionError):
        gen_cycle(2)
    with pytest.raises(ConstructionError):
        gen_circulant(4, 4)


def test_cycle_blocks_have_two_disjoint_paths():
    g = to_nx(gen_cycle(6))
    for a, b in itertools.combinations(gen_cycle(6).block_ids, 2):
        assert nx.node_connectivity(g, a, b) == 2


def test_circulant_block_pairs_have_two_paths():
    base = gen_circulant(9, 3)
    g = to_nx(base)
    pairs = list(itertools.combinations(base.block_ids, 2))
    assert len(pairs) == 36
    assert all(nx.node_connectivity(g, a, b) >= 2 for a, b in pairs)


def _two_short_disjoint(g: nx.Graph, a: str, b: str, cutoff: int) -> bool:
    paths = list(nx.all_simple_paths(g, a, b, cutoff=cutoff))
    for p1, p2 in itertools.combinations(paths, 2):
        if not set(p1[1:-1]) & set(p2[1:-1]):
            return True
    return False


def test_double_cover_join():
    base = gen_cycle(5)
    g = double_cover_join(base)
    p = degree_profile(g)
    assert (g.n, g.e, p.d, p.delta, p.regular, p.uniform) == (10, 10, 3, 3, True, True)
    ng = to_nx(g)
    for side in (g.block_ids, g.node_ids):
        for a, b in itertools.combinations(side, 2):
            assert _two_short_disjoint(ng, a, b, 6), (a, b)
    with pytest.raises(ConstructionError):
        double_cover_join(build_td(2, 3).graph)


def test_theorem1_checks():
    assert check_theorem1(gen_cycle(5), two_step(gen_cycle(5), build_td(2, 3)))
    assert check_theorem1(gen_circulant(12, 3), two_step(gen_circulant(12, 3), build_td(3, 3)))
    with pytest.raises(PreconditionError):
        check_theorem1(gen_cycle(3), two_step(gen_cycle(3), build_td(2, 3)))


def test_disconnected_base_rejected():
    from tdnet.bigraph import BipartiteGraph

    a = gen_cycle(3)
    edges = list(a.edges) + [(f"{x}'", f"{b}'") for x, b in a.edges]
    g = BipartiteGraph(
        list(a.node_ids) + [f"{x}'" for x in a.node_ids], list(a.block_ids) + [f"{b}'" for b in a.block_ids], edges
    )
    with pytest.raises(ConstructionError):
        two_step(g, build_td(2, 3))


def test_serialization_round_trip(tmp_path, h_circ93):
    f = tmp_path / "h.json"
    construct.save(h_circ93, f)
    h = construct.load(f)
    assert h.graph == h_circ93.graph
    assert h.group_of_node == h_circ93.group_of_node
    assert h.origin_of_block == h_circ93.origin_of_block
    star = three_step(gen_cycle(5), build_td(2, 3))
    back = construct.from_dict(construct.to_dict(star))
    assert back.dualized and back.graph == star.graph
