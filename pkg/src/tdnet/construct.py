"""2-step / 3-step constructions from a base graph and a transversal design.

Every node ``p`` of the base becomes a group ``G_p`` of ``k`` nodes and every
base block ``Q`` becomes a copy ``T_Q`` of the design rooted on the groups of
the nodes adjacent to ``Q``. The 3-step result is the dual of the 2-step one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from tdnet import bigraph, tdesign
from tdnet.bigraph import (
    BipartiteGraph,
    FormatError,
    GraphError,
    degree_profile,
    dual,
    line_diameter,
)
from tdnet.tdesign import TransversalDesign


class ConstructionError(GraphError):
    pass


class PreconditionError(ConstructionError):
    """A theorem's hypothesis does not hold, so it makes no claim."""


@dataclass(frozen=True, eq=False)
class ConstructedGraph:
    graph: BipartiteGraph
    base: BipartiteGraph
    td: TransversalDesign
    group_of_node: dict[str, tuple[str, int]]
    origin_of_block: dict[str, tuple[str, str]]
    roots_of_copy: dict[str, tuple[str, ...]]
    dualized: bool = False
    node_at: dict[tuple[str, int], str] = field(init=False, repr=False)
    block_at: dict[tuple[str, str], str] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_at", {v: x for x, v in self.group_of_node.items()})
        object.__setattr__(self, "block_at", {v: b for b, v in self.origin_of_block.items()})

    @property
    def two_step_graph(self) -> BipartiteGraph:
        return dual(self.graph) if self.dualized else self.graph

    def copy_of(self, block: str) -> str:
        return self.origin_of_block[block][0]

    def group(self, p: str) -> tuple[str, ...]:
        return tuple(self.node_at[(p, j)] for j in range(self.td.k))

    def to_design_node(self, q: str, x: str) -> str:
        """Design node of ``T`` that the node ``x`` of ``H`` plays inside ``T_Q``."""
        p, j = self.group_of_node[x]
        return self.td.groups[self.roots_of_copy[q].index(p)][j]

    def from_design_node(self, q: str, u: str) -> str:
        i, j = self.td.position[u]
        return self.node_at[(self.roots_of_copy[q][i], j)]


def _check_base(h0: BipartiteGraph, t: TransversalDesign) -> None:
    prof = degree_profile(h0)
    if not (prof.regular and prof.uniform):
        raise ConstructionError("base graph must be regular and uniform")
    if prof.delta != t.delta:
        raise ConstructionError(f"base rank {prof.delta} differs from design delta {t.delta}")
    if len(t.groups) != t.delta or any(len(g) != t.k for g in t.groups):
        raise ConstructionError("design groups do not match its parameters")
    if not h0.is_connected():
        raise ConstructionError("base graph must be connected")


def two_step(h0: BipartiteGraph, t: TransversalDesign) -> ConstructedGraph:
    _check_base(h0, t)
    k = t.k
    group_of_node = {}
    nodes = []
    for p in h0.node_ids:
        for j in range(k):
            x = f"{p}|{j + 1}"
            nodes.append(x)
            group_of_node[x] = (p, j)
    node_at = {v: x for x, v in group_of_node.items()}

    origin_of_block = {}
    roots_of_copy = {}
    blocks = []
    edges = []
    for q in h0.block_ids:
        roots = h0.neighbours(q)
        roots_of_copy[q] = roots
        for u in t.blocks:
            b = f"{q}|{u}"
            blocks.append(b)
            origin_of_block[b] = (q, u)
            for x in t.graph.neighbours(u):
                i, j = t.position[x]
                edges.append((node_at[(roots[i], j)], b))
    h = BipartiteGraph(nodes, blocks, edges, meta={"kind": "two-step"})
    out = ConstructedGraph(h, h0, t, group_of_node, origin_of_block, roots_of_copy)
    _check_counts(out)
    return out


def _check_counts(c: ConstructedGraph) -> None:
    h = c.two_step_graph
    n, e = c.base.n, c.base.e
    prof0 = degree_profile(c.base)
    prof = degree_profile(h)
    k = c.td.k
    expected = (n * k, e * k * k, prof0.d * k, c.td.delta)
    got = (h.n, h.e, prof.d, prof.delta)
    if got != expected or not (prof.regular and prof.uniform):
        raise ConstructionError(f"count identities violated: expected {expected}, got {got}")


def three_step(h0: BipartiteGraph, t: TransversalDesign) -> ConstructedGraph:
    c = two_step(h0, t)
    return _dualize(c)


def _dualize(c: ConstructedGraph) -> ConstructedGraph:
    g = dual(c.graph)
    g.meta["kind"] = "three-step"
    return ConstructedGraph(
        g, c.base, c.td, c.group_of_node, c.origin_of_block, c.roots_of_copy, dualized=True
    )


def iterate(
    h0: BipartiteGraph,
    t: TransversalDesign | list[TransversalDesign],
    i: int,
    *,
    three: bool = False,
) -> ConstructedGraph:
    """Apply the 2-step method ``i`` times; a list supplies one design per round."""
    if i < 1:
        raise ConstructionError("need at least one round")
    designs = list(t) if isinstance(t, list) else [t] * i
    if len(designs) != i:
        raise ConstructionError("one design per round required")
    base = h0
    out = None
    for td in designs:
        out = two_step(base, td)
        base = out.graph
    assert out is not None
    return _dualize(out) if three else out


# -- base generators ------------------------------------------------------
def gen_circulant(n: int, delta: int) -> BipartiteGraph:
    """Node ``i`` lies in blocks ``i, i+1, ..., i+delta-1`` (mod ``n``)."""
    if not 2 <= delta < n:
        raise ConstructionError(f"need 2 <= delta < n, got n={n}, delta={delta}")
    nodes = [f"p{i}" for i in range(n)]
    blocks = [f"Q{i}" for i in range(n)]
    edges = [(nodes[i], blocks[(i + s) % n]) for i in range(n) for s in range(delta)]
    return BipartiteGraph(nodes, blocks, edges, meta={"kind": "circulant", "n": n, "delta": delta})


def gen_cycle(n: int) -> BipartiteGraph:
    """Alternating cycle with ``n`` nodes and ``n`` blocks (length ``2n``)."""
    if n < 3:
        raise ConstructionError(f"cycle needs n >= 3, got {n}")
    g = gen_circulant(n, 2)
    g.meta.update(kind="cycle")
    return g


def double_cover_join(g: BipartiteGraph) -> BipartiteGraph:
    """Two disjoint copies plus the edges ``n_i``(one copy) -- ``b_i``(other copy).

    Nodes and blocks are paired by their position in ``node_ids``/``block_ids``.
    """
    prof = degree_profile(g)
    if g.n != g.e:
        raise ConstructionError("need equal numbers of nodes and blocks")
    if not (prof.regular and prof.uniform and prof.d == prof.delta):
        raise ConstructionError("need an (r, r)-regular uniform graph")
    nodes = [f"{x}~{c}" for c in (0, 1) for x in g.node_ids]
    blocks = [f"{b}~{c}" for c in (0, 1) for b in g.block_ids]
    edges = [(f"{p}~{c}", f"{q}~{c}") for c in (0, 1) for p, q in g.edges]
    for x, b in zip(g.node_ids, g.block_ids):
        edges.append((f"{x}~0", f"{b}~1"))
        edges.append((f"{x}~1", f"{b}~0"))
    return BipartiteGraph(nodes, blocks, edges, meta={"kind": "double-cover"})


def check_theorem1(h0: BipartiteGraph, h: ConstructedGraph) -> bool:
    """Whether the 2-step graph keeps the base's line-diameter (needs it >= 4)."""
    lam = line_diameter(h0)
    if lam < 4:
        raise PreconditionError(f"base line-diameter {lam} < 4; no claim is made")
    return line_diameter(h.two_step_graph) == lam


# -- serialization -------------------------------------------------------
# Provenance is rebuilt from the base and the design; the construction is
# deterministic, so only those two and the orientation are stored.
def to_dict(c: ConstructedGraph) -> dict[str, Any]:
    return {
        "kind": "constructed",
        "three_step": c.dualized,
        "base": bigraph.to_dict(c.base),
        "td": tdesign.to_dict(c.td),
    }


def from_dict(data: Mapping[str, Any]) -> ConstructedGraph:
    try:
        base = bigraph.from_dict(data["base"])
        t = tdesign.from_dict(data["td"])
        three = bool(data.get("three_step", False))
    except (KeyError, TypeError) as exc:
        raise FormatError(f"bad constructed-graph file: {exc}") from None
    return three_step(base, t) if three else two_step(base, t)


def is_constructed(data: Mapping[str, Any]) -> bool:
    return isinstance(data, Mapping) and data.get("kind") == "constructed"


def save(c: ConstructedGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_dict(c), indent=1) + "\n")


def load(path: str | Path) -> ConstructedGraph:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return from_dict(data)
