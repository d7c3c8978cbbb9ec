"""Transversal designs viewed as bipartite graphs.

A ``[delta, k]`` design has ``delta`` groups of ``k`` nodes and ``k**2`` blocks;
every block meets every group exactly once and every pair of nodes from
different groups lies in exactly one block (the block *generated* by the pair).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from tdnet import bigraph
from tdnet.bigraph import BipartiteGraph, FormatError, GraphError
from tdnet.field import build_field, is_supported_order


class DesignError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class TransversalDesign:
    delta: int
    k: int
    groups: tuple[tuple[str, ...], ...]
    graph: BipartiteGraph
    # derived, filled in __post_init__
    position: dict[str, tuple[int, int]] = field(init=False, repr=False)
    gen_index: dict[tuple[str, str], str] = field(init=False, repr=False)
    members: dict[str, tuple[str | None, ...]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        groups = tuple(tuple(g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        position = {}
        for i, grp in enumerate(groups):
            for j, x in enumerate(grp):
                position[x] = (i, j)
        members: dict[str, tuple[str | None, ...]] = {}
        gen_index: dict[tuple[str, str], str] = {}
        for b in self.graph.block_ids:
            row: list[str | None] = [None] * len(groups)
            for x in self.graph.neighbours(b):
                if x in position:
                    row[position[x][0]] = x
            members[b] = tuple(row)
            nbrs = [x for x in self.graph.neighbours(b) if x in position]
            for x, y in itertools.combinations(nbrs, 2):
                if position[x][0] != position[y][0]:
                    gen_index.setdefault((x, y), b)
                    gen_index.setdefault((y, x), b)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "gen_index", gen_index)

    @property
    def blocks(self) -> tuple[str, ...]:
        return self.graph.block_ids

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.graph.node_ids

    def group_of(self, x: str) -> int:
        return self.position[x][0]

    def member(self, block: str, group: int) -> str:
        """The node of ``group`` lying in ``block``."""
        x = self.members[block][group]
        if x is None:
            raise DesignError(f"block {block!r} misses group {group}")
        return x

    def generated_block(self, x: str, y: str) -> str:
        return generated_block(self, x, y)


def generated_block(t: TransversalDesign, x: str, y: str) -> str:
    if x not in t.position or y not in t.position:
        raise DesignError(f"unknown node in pair ({x!r}, {y!r})")
    if t.position[x][0] == t.position[y][0]:
        raise DesignError(f"{x!r} and {y!r} lie in the same group")
    try:
        return t.gen_index[(x, y)]
    except KeyError:
        raise DesignError(f"no block contains both {x!r} and {y!r}") from None


def _check_params(delta: int, k: int) -> None:
    if not is_supported_order(k):
        raise DesignError(f"k={k} is not a supported prime power")
    if not 2 <= delta <= k + 1:
        raise DesignError(f"need 2 <= delta <= k+1, got delta={delta}, k={k}")


def node_id(group: int, value: int) -> str:
    return f"x{group + 1}_{value}"


def block_id(a: int, b: int) -> str:
    return f"U{a}_{b}"


def build_td(delta: int, k: int) -> TransversalDesign:
    """Orthogonal-array construction over GF(k).

    Blocks are indexed by ``(a, b)`` in F x F. Group ``i < min(delta, k)`` uses
    the field element ``c_i = i`` and its node with value ``v`` lies in block
    ``(a, b)`` iff ``v == a*c_i + b``; the extra group used when
    ``delta == k + 1`` has ``v == a``.
    """
    _check_params(delta, k)
    F = build_field(k)
    groups = [[node_id(i, v) for v in range(k)] for i in range(delta)]
    blocks = []
    edges = []
    for a in range(k):
        for b in range(k):
            u = block_id(a, b)
            blocks.append(u)
            for i in range(delta):
                v = F.add(F.mul(a, i), b) if i < k else a
                edges.append((groups[i][v], u))
    g = BipartiteGraph(
        [x for grp in groups for x in grp], blocks, edges, meta={"kind": "td", "delta": delta, "k": k}
    )
    return TransversalDesign(delta, k, tuple(map(tuple, groups)), g)


def canonical_td_3_2() -> TransversalDesign:
    """The [3,2] design with blocks B1..B4 and groups {r_i, s_i}."""
    edges = [
        ("r1", "B1"), ("r1", "B2"), ("s1", "B3"), ("s1", "B4"),
        ("r2", "B1"), ("r2", "B3"), ("s2", "B2"), ("s2", "B4"),
        ("r3", "B1"), ("r3", "B4"), ("s3", "B2"), ("s3", "B3"),
    ]  # fmt: skip
    groups = (("r1", "s1"), ("r2", "s2"), ("r3", "s3"))
    g = BipartiteGraph([x for grp in groups for x in grp], ["B1", "B2", "B3", "B4"], edges)
    return TransversalDesign(3, 2, groups, g)


def verify_td(t: TransversalDesign) -> list[str]:
    """List every violated clause of the transversal design definition."""
    report: list[str] = []
    delta, k = t.delta, t.k
    if delta < 2 or k < 2:
        report.append(f"parameters must be >= 2 (delta={delta}, k={k})")
    if len(t.groups) != delta:
        report.append(f"expected {delta} groups, found {len(t.groups)}")
    for i, grp in enumerate(t.groups):
        if len(grp) != k:
            report.append(f"group {i} has {len(grp)} nodes, expected {k}")
    grouped = [x for grp in t.groups for x in grp]
    if len(set(grouped)) != len(grouped):
        report.append("groups are not disjoint")
    if set(grouped) != set(t.graph.node_ids):
        report.append("groups do not partition the node set")
    if len(t.graph.node_ids) != delta * k:
        report.append(f"expected {delta * k} nodes, found {len(t.graph.node_ids)}")
    if len(t.graph.block_ids) != k * k:
        report.append(f"expected {k * k} blocks, found {len(t.graph.block_ids)}")

    for b in t.graph.block_ids:
        counts = [0] * len(t.groups)
        for x in t.graph.neighbours(b):
            if x in t.position:
                counts[t.position[x][0]] += 1
        for i, c in enumerate(counts):
            if c != 1:
                report.append(f"block {b!r} meets group {i} in {c} nodes")

    cover: dict[tuple[str, str], int] = {}
    for b in t.graph.block_ids:
        nbrs = sorted((x for x in t.graph.neighbours(b) if x in t.position), key=t.position.__getitem__)
        for x, y in itertools.combinations(nbrs, 2):
            if t.position[x][0] != t.position[y][0]:
                cover[(x, y)] = cover.get((x, y), 0) + 1
    for gi, gj in itertools.combinations(range(len(t.groups)), 2):
        for x in t.groups[gi]:
            for y in t.groups[gj]:
                c = cover.get((x, y), 0)
                if c != 1:
                    report.append(f"pair ({x!r}, {y!r}) lies in {c} blocks")
    return report


def find_isomorphism(
    t1: TransversalDesign, t2: TransversalDesign, fix: Mapping[str, str] | None = None
) -> dict[str, str] | None:
    """Exhaustive search for an isomorphism ``t1 -> t2`` respecting groups.

    Returns a mapping on nodes and blocks, or ``None``. ``fix`` pins some
    elements (e.g. a block) to prescribed images. Only meant for tiny designs.
    """
    if (t1.delta, t1.k) != (t2.delta, t2.k):
        return None
    fix = dict(fix or {})
    target_blocks = {frozenset(t2.graph.neighbours(b)): b for b in t2.graph.block_ids}
    for gperm in itertools.permutations(range(t2.delta)):
        for inner in itertools.product(itertools.permutations(range(t2.k)), repeat=t1.delta):
            nmap = {}
            for i, grp in enumerate(t1.groups):
                for j, x in enumerate(grp):
                    nmap[x] = t2.groups[gperm[i]][inner[i][j]]
            bmap = {}
            for b in t1.graph.block_ids:
                img = target_blocks.get(frozenset(nmap[x] for x in t1.graph.neighbours(b)))
                if img is None:
                    break
                bmap[b] = img
            else:
                full = {**nmap, **bmap}
                if all(full.get(a) == b for a, b in fix.items()):
                    return full
    return None


# -- serialization -------------------------------------------------------
def to_dict(t: TransversalDesign) -> dict[str, Any]:
    return {
        "delta": t.delta,
        "k": t.k,
        "groups": [list(g) for g in t.groups],
        "graph": bigraph.to_dict(t.graph),
    }


def from_dict(data: Mapping[str, Any]) -> TransversalDesign:
    try:
        delta = int(data["delta"])
        k = int(data["k"])
        groups = [list(g) for g in data["groups"]]
        graph_data = data["graph"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad design file: {exc}") from None
    g = bigraph.from_dict(graph_data)
    return TransversalDesign(delta, k, tuple(map(tuple, groups)), g)


def save(t: TransversalDesign, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_dict(t), indent=1) + "\n")


def load(path: str | Path) -> TransversalDesign:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return from_dict(data)


def mutate(t: TransversalDesign, *, drop: Iterable[tuple[str, str]] = (), add_blocks: Sequence[tuple[str, Sequence[str]]] = ()) -> TransversalDesign:
    """Copy of ``t`` with incidences removed and/or extra blocks added (test helper)."""
    drop = set(drop)
    edges = [e for e in t.graph.edges if e not in drop]
    blocks = list(t.graph.block_ids)
    for name, nodes in add_blocks:
        blocks.append(name)
        edges.extend((x, name) for x in nodes)
    g = BipartiteGraph(t.graph.node_ids, blocks, edges, allow_isolated=True)
    return TransversalDesign(t.delta, t.k, t.groups, g)
