"""Bipartite incidence structures: nodes on the left, blocks on the right.

Distances count edges of the bipartite graph, so a block-to-block hop through a
shared node has length 2. This is twice the "number of nodes on the path"
convention used by some of the DCN literature.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs and impossible queries."""


class FormatError(GraphError):
    """Raised when a serialized graph cannot be parsed."""


class DisconnectedError(GraphError):
    """Raised when a distance-based quantity is requested on a disconnected graph."""


@dataclass(frozen=True)
class DegreeProfile:
    d: int
    delta: int
    regular: bool
    uniform: bool


@dataclass(frozen=True)
class AltPath:
    """Alternating sequence of node and block ids."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def length(self) -> int:
        return len(self.elements) - 1

    @property
    def source(self) -> str:
        return self.elements[0]

    @property
    def destination(self) -> str:
        return self.elements[-1]

    def edges(self) -> list[tuple[str, str]]:
        return list(zip(self.elements, self.elements[1:]))

    def reversed(self) -> AltPath:
        return AltPath(self.elements[::-1])

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


class BipartiteGraph:
    """Immutable bipartite graph with opaque string ids.

    ``edges`` are ``(node, block)`` pairs. Adjacency lists are ordered by the
    position of the neighbour in ``node_ids``/``block_ids`` so that every
    traversal is deterministic.
    """

    __slots__ = ("node_ids", "block_ids", "edges", "labels", "meta", "_adj", "_index", "_is_node")

    def __init__(
        self,
        node_ids: Iterable[str],
        block_ids: Iterable[str],
        edges: Iterable[tuple[str, str]],
        labels: Mapping[str, str] | None = None,
        meta: Mapping[str, Any] | None = None,
        *,
        allow_isolated: bool = False,
    ) -> None:
        node_ids = tuple(node_ids)
        block_ids = tuple(block_ids)
        if len(set(node_ids)) != len(node_ids):
            raise GraphError("duplicate node id")
        if len(set(block_ids)) != len(block_ids):
            raise GraphError("duplicate block id")
        is_node = {x: True for x in node_ids}
        for b in block_ids:
            if b in is_node:
                raise GraphError(f"id {b!r} used for both a node and a block")
            is_node[b] = False
        index = {x: i for i, x in enumerate(node_ids)}
        index.update({b: i for i, b in enumerate(block_ids)})

        adj: dict[str, list[str]] = {x: [] for x in is_node}
        edge_set = set()
        for p, q in edges:
            if is_node.get(p) is not True:
                raise GraphError(f"edge ({p!r}, {q!r}) references unknown node {p!r}")
            if is_node.get(q) is not False:
                raise GraphError(f"edge ({p!r}, {q!r}) references unknown block {q!r}")
            if (p, q) in edge_set:
                continue
            edge_set.add((p, q))
            adj[p].append(q)
            adj[q].append(p)
        if not allow_isolated:
            isolated = [x for x, nbrs in adj.items() if not nbrs]
            if isolated:
                raise GraphError(f"isolated element {isolated[0]!r}")
        for x in adj:
            adj[x].sort(key=index.__getitem__)

        self.node_ids = node_ids
        self.block_ids = block_ids
        self.edges = frozenset(edge_set)
        self.labels = dict(labels or {})
        self.meta = dict(meta or {})
        self._adj = {x: tuple(v) for x, v in adj.items()}
        self._index = index
        self._is_node = is_node

    # -- basic queries -------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (
            self.node_ids == other.node_ids
            and self.block_ids == other.block_ids
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.node_ids, self.block_ids, self.edges))

    def __repr__(self) -> str:
        return f"BipartiteGraph(nodes={len(self.node_ids)}, blocks={len(self.block_ids)}, edges={len(self.edges)})"

    def __contains__(self, x: str) -> bool:
        return x in self._is_node

    @property
    def n(self) -> int:
        return len(self.node_ids)

    @property
    def e(self) -> int:
        return len(self.block_ids)

    def is_node(self, x: str) -> bool:
        return self._is_node[x]

    def is_block(self, x: str) -> bool:
        return not self._is_node[x]

    def neighbours(self, x: str) -> tuple[str, ...]:
        return self._adj[x]

    def degree(self, x: str) -> int:
        return len(self._adj[x])

    def adjacent(self, x: str, y: str) -> bool:
        if self._is_node.get(x) is True:
            return (x, y) in self.edges
        return (y, x) in self.edges

    def elements(self) -> tuple[str, ...]:
        return self.node_ids + self.block_ids

    def order_key(self, x: str) -> tuple[int, int]:
        """Sort key placing nodes before blocks, each in declaration order."""
        return (0 if self._is_node[x] else 1, self._index[x])

    # -- distances -----------------------------------------------------
    def bfs(self, source: str, *, blocked: Iterable[str] = ()) -> dict[str, int]:
        """Edge-count distances from ``source`` avoiding ``blocked`` elements."""
        blocked = set(blocked)
        dist = {source: 0}
        queue = deque([source])
        adj = self._adj
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for v in adj[u]:
                if v not in dist and v not in blocked:
                    dist[v] = du
                    queue.append(v)
        return dist

    def bfs_tree(self, source: str, *, blocked: Iterable[str] = ()) -> dict[str, str | None]:
        """Parent pointers of the breadth-first tree rooted at ``source``."""
        blocked = set(blocked)
        parent: dict[str, str | None] = {source: None}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v in self._adj[u]:
                if v not in parent and v not in blocked:
                    parent[v] = u
                    queue.append(v)
        return parent

    def shortest_path(self, source: str, target: str, *, blocked: Iterable[str] = ()) -> AltPath | None:
        parent = self.bfs_tree(source, blocked=blocked)
        if target not in parent:
            return None
        seq = [target]
        while parent[seq[-1]] is not None:
            seq.append(parent[seq[-1]])
        return AltPath(tuple(reversed(seq)))

    def is_connected(self) -> bool:
        elems = self.elements()
        if not elems:
            return True
        return len(self.bfs(elems[0])) == len(elems)


def degree_profile(g: BipartiteGraph) -> DegreeProfile:
    node_degs = {g.degree(x) for x in g.node_ids}
    block_ranks = {g.degree(b) for b in g.block_ids}
    return DegreeProfile(
        d=max(node_degs, default=0),
        delta=max(block_ranks, default=0),
        regular=len(node_degs) <= 1,
        uniform=len(block_ranks) <= 1,
    )


def dual(g: BipartiteGraph) -> BipartiteGraph:
    return BipartiteGraph(
        g.block_ids,
        g.node_ids,
        ((q, p) for p, q in g.edges),
        labels=g.labels,
        meta=g.meta,
        allow_isolated=True,
    )


def _side_diameter(g: BipartiteGraph, side: Sequence[str]) -> int:
    if not g.is_connected():
        raise DisconnectedError("graph is disconnected; no finite diameter")
    best = 0
    targets = set(side)
    for s in side:
        dist = g.bfs(s)
        best = max(best, max(d for x, d in dist.items() if x in targets))
    return best


def diameter(g: BipartiteGraph) -> int:
    """Largest node-to-node distance (blocks are never endpoints)."""
    return _side_diameter(g, g.node_ids)


def line_diameter(g: BipartiteGraph) -> int:
    """Largest block-to-block distance."""
    return _side_diameter(g, g.block_ids)


def validate_path(g: BipartiteGraph, p: AltPath | Sequence[str]) -> bool:
    elems = tuple(p.elements if isinstance(p, AltPath) else p)
    if not elems:
        return False
    if any(x not in g for x in elems):
        return False
    if len(set(elems)) != len(elems):
        return False
    for a, b in zip(elems, elems[1:]):
        if g.is_node(a) == g.is_node(b) or not g.adjacent(a, b):
            return False
    return True


# -- serialization -------------------------------------------------------
def to_dict(g: BipartiteGraph) -> dict[str, Any]:
    meta = dict(g.meta)
    if g.labels:
        meta["labels"] = dict(g.labels)
    index = {b: i for i, b in enumerate(g.block_ids)}
    node_index = {x: i for i, x in enumerate(g.node_ids)}
    edges = sorted(g.edges, key=lambda e: (node_index[e[0]], index[e[1]]))
    return {
        "nodes": list(g.node_ids),
        "blocks": list(g.block_ids),
        "edges": [list(e) for e in edges],
        "meta": meta,
    }


def from_dict(data: Mapping[str, Any]) -> BipartiteGraph:
    try:
        nodes = data["nodes"]
        blocks = data["blocks"]
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing graph field: {exc}") from None
    if not all(isinstance(x, str) for x in list(nodes) + list(blocks)):
        raise FormatError("ids must be strings")
    pairs = []
    for e in edges:
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise FormatError(f"bad edge entry {e!r}")
        pairs.append((e[0], e[1]))
    meta = dict(data.get("meta") or {})
    labels = meta.pop("labels", None)
    return BipartiteGraph(nodes, blocks, pairs, labels=labels, meta=meta)


def save(g: BipartiteGraph, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_dict(g), indent=1) + "\n")


def load(path: str | Path) -> BipartiteGraph:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return from_dict(data)


def _dot_id(x: str) -> str:
    return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: BipartiteGraph, path: str | Path | None = None) -> str:
    """Undirected DOT text; nodes drawn as circles, blocks as squares."""
    lines = ["graph G {"]
    for x in g.node_ids:
        label = g.labels.get(x)
        extra = f", label={_dot_id(label)}" if label else ""
        lines.append(f"  {_dot_id(x)} [shape=circle{extra}];")
    for b in g.block_ids:
        label = g.labels.get(b)
        extra = f", label={_dot_id(label)}" if label else ""
        lines.append(f"  {_dot_id(b)} [shape=square{extra}];")
    for p, q in sorted(g.edges, key=lambda e: (g.order_key(e[0]), g.order_key(e[1]))):
        lines.append(f"  {_dot_id(p)} -- {_dot_id(q)};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
