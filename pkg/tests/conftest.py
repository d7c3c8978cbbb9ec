from __future__ import annotations

import networkx as nx
import pytest

from tdnet.construct import double_cover_join, gen_circulant, gen_cycle, three_step, two_step
from tdnet.tdesign import build_td


def to_nx(g) -> nx.Graph:
    out = nx.Graph()
    out.add_nodes_from(g.node_ids, side=0)
    out.add_nodes_from(g.block_ids, side=1)
    out.add_edges_from(g.edges)
    return out


def internally_disjoint(paths) -> bool:
    """Straight from the definition: endpoints only as endpoints, interiors used once."""
    ends = {p[0] for p in paths} | {p[-1] for p in paths}
    inner = [x for p in paths for x in p[1:-1]]
    return not (set(inner) & ends) and len(inner) == len(set(inner))


def edge_disjoint(paths) -> bool:
    used = [frozenset(e) for p in paths for e in zip(p, p[1:])]
    return len(used) == len(set(used))


@pytest.fixture(scope="session")
def c10():
    return gen_cycle(5)


@pytest.fixture(scope="session")
def h_c10(c10):
    return two_step(c10, build_td(2, 3))


@pytest.fixture(scope="session")
def hstar_c10(c10):
    return three_step(c10, build_td(2, 3))


@pytest.fixture(scope="session")
def h_circ93():
    return two_step(gen_circulant(9, 3), build_td(3, 3))


@pytest.fixture(scope="session")
def h_dc32():
    return two_step(double_cover_join(gen_cycle(5)), build_td(3, 2))


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
