"""Uniform access to a transversal design, standalone or as a copy ``T_Q`` in H."""

from __future__ import annotations

from typing import Iterable

from tdnet.bigraph import BipartiteGraph
from tdnet.construct import ConstructedGraph
from tdnet.routing.pathset import RoutingError
from tdnet.tdesign import DesignError, TransversalDesign


class DesignView:
    """Groups are indexed ``0..delta-1``; element ids are those of ``host``."""

    delta: int
    k: int
    groups: tuple[tuple[str, ...], ...]
    host: BipartiteGraph

    def group_of(self, x: str) -> int:
        raise NotImplementedError

    def member(self, block: str, i: int) -> str:
        raise NotImplementedError

    def gen(self, x: str, y: str) -> str:
        raise NotImplementedError

    def has_block(self, b: str) -> bool:
        raise NotImplementedError

    def has_node(self, x: str) -> bool:
        raise NotImplementedError

    def roots(self, block: str) -> list[str]:
        return [self.member(block, i) for i in range(self.delta)]

    def contains(self, x: str) -> bool:
        return self.has_node(x) or self.has_block(x)


class TdView(DesignView):
    def __init__(self, t: TransversalDesign) -> None:
        self.t = t
        self.delta, self.k = t.delta, t.k
        self.groups = t.groups
        self.host = t.graph

    def group_of(self, x: str) -> int:
        return self.t.group_of(x)

    def member(self, block: str, i: int) -> str:
        return self.t.member(block, i)

    def gen(self, x: str, y: str) -> str:
        try:
            return self.t.generated_block(x, y)
        except DesignError as exc:
            raise RoutingError(str(exc)) from None

    def has_block(self, b: str) -> bool:
        return b in self.t.members

    def has_node(self, x: str) -> bool:
        return x in self.t.position


class CopyView(DesignView):
    """The copy ``T_Q`` inside a 2-step graph; group ``i`` is ``G_p`` for the i-th root ``p`` of ``Q``."""

    def __init__(self, h: ConstructedGraph, q: str) -> None:
        self.h, self.q = h, q
        self.delta, self.k = h.td.delta, h.td.k
        self.base_roots = tuple(h.roots_of_copy[q])
        self.index = {p: i for i, p in enumerate(self.base_roots)}
        self.groups = tuple(h.group(p) for p in self.base_roots)
        self.host = h.two_step_graph

    def group_of(self, x: str) -> int:
        p = self.h.group_of_node[x][0]
        try:
            return self.index[p]
        except KeyError:
            raise RoutingError(f"{x!r} is not a node of the copy {self.q!r}") from None

    def group_index_of(self, p: str) -> int:
        return self.index[p]

    def member(self, block: str, i: int) -> str:
        q, u = self.h.origin_of_block[block]
        if q != self.q:
            raise RoutingError(f"{block!r} is not a block of the copy {self.q!r}")
        _, j = self.h.td.position[self.h.td.member(u, i)]
        return self.h.node_at[(self.base_roots[i], j)]

    def gen(self, x: str, y: str) -> str:
        try:
            u = self.h.td.generated_block(self.h.to_design_node(self.q, x), self.h.to_design_node(self.q, y))
        except (DesignError, ValueError, KeyError) as exc:
            raise RoutingError(f"cannot generate a block of {self.q!r} from {x!r}, {y!r}: {exc}") from None
        return self.h.block_at[(self.q, u)]

    def has_block(self, b: str) -> bool:
        o = self.h.origin_of_block.get(b)
        return o is not None and o[0] == self.q

    def has_node(self, x: str) -> bool:
        g = self.h.group_of_node.get(x)
        return g is not None and g[0] in self.index


def lemma1_generate(t: TransversalDesign | DesignView, u: str, pairs: Iterable[tuple[str, str]]) -> list[str]:
    """Blocks generated by ``pairs``, each holding exactly one neighbour of ``u``.

    Under the hypotheses (one root per pair, no root reused, no same-group
    pair) the generated blocks are pairwise distinct and differ from ``u``;
    both facts are checked.
    """
    view = t if isinstance(t, DesignView) else TdView(t)
    roots = set(view.roots(u))
    used: set[str] = set()
    out = []
    for x, y in pairs:
        inside = (x in roots) + (y in roots)
        if inside != 1:
            raise RoutingError(f"pair ({x!r}, {y!r}) must hold exactly one neighbour of {u!r}")
        r = x if x in roots else y
        if r in used:
            raise RoutingError(f"neighbour {r!r} appears in two pairs")
        used.add(r)
        if view.group_of(x) == view.group_of(y):
            raise RoutingError(f"pair ({x!r}, {y!r}) lies inside one group")
        out.append(view.gen(x, y))
    if len(set(out)) != len(out) or u in out:
        raise RoutingError("generated blocks are not distinct from each other and from the source")
    return out
