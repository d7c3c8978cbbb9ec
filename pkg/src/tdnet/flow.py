"""Unit-capacity max-flow on bipartite graphs (Edmonds-Karp).

``internal`` mode splits every non-terminal element into an in/out pair of
capacity 1, so the flow value is the maximum number of internally-disjoint
paths. ``edge`` mode gives each incidence capacity 1 in both directions.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from tdnet.bigraph import BipartiteGraph, GraphError

INTERNAL = "internal"
EDGE = "edge"


def _build(g: BipartiteGraph, src: str, dst: str, mode: str, blocked: set[str]):
    cap: dict[tuple, int] = {}
    out: dict[object, list] = {}

    def arc(u, v, c):
        if (u, v) not in cap:
            out.setdefault(u, []).append(v)
            out.setdefault(v, []).append(u)
            cap.setdefault((v, u), 0)
        cap[(u, v)] = cap.get((u, v), 0) + c

    big = len(g.elements()) + 1
    elems = [x for x in g.elements() if x not in blocked]
    if mode == INTERNAL:
        for x in elems:
            arc((x, 0), (x, 1), big if x in (src, dst) else 1)
        for x in elems:
            for y in g.neighbours(x):
                if y not in blocked:
                    arc((x, 1), (y, 0), 1)
        return cap, out, (src, 1), (dst, 0)
    if mode == EDGE:
        for x in elems:
            for y in g.neighbours(x):
                if y not in blocked:
                    arc(x, y, 1)
        return cap, out, src, dst
    raise GraphError(f"unknown mode {mode!r}")


def max_flow(
    g: BipartiteGraph,
    src: str,
    dst: str,
    mode: str = INTERNAL,
    *,
    blocked: Iterable[str] = (),
    limit: int | None = None,
) -> tuple[int, list[list[str]]]:
    """Return ``(value, paths)`` for a maximum set of disjoint ``src``-``dst`` paths."""
    if src == dst:
        raise GraphError("source and sink coincide")
    if src not in g or dst not in g:
        raise GraphError("unknown terminal")
    blocked = set(blocked) - {src, dst}
    cap, out, s, t = _build(g, src, dst, mode, blocked)
    residual = dict(cap)
    value = 0
    while limit is None or value < limit:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for v in out.get(u, ()):
                if v not in parent and residual[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            break
        v = t
        while parent[v] is not None:
            u = parent[v]
            residual[(u, v)] -= 1
            residual[(v, u)] += 1
            v = u
        value += 1

    flow = {a: cap[a] - residual[a] for a in cap if cap[a] - residual[a] > 0}
    paths = []
    for _ in range(value):
        seq = [s]
        pos = {s: 0}
        while seq[-1] != t:
            u = seq[-1]
            v = next(w for w in out[u] if flow.get((u, w), 0) > 0)
            flow[(u, v)] -= 1
            if v in pos:
                # drop the cycle closed by this arc
                del seq[pos[v] + 1:]
                pos = {x: i for i, x in enumerate(seq)}
                continue
            pos[v] = len(seq)
            seq.append(v)
        paths.append(seq)

    if mode == INTERNAL:
        collapsed = []
        for seq in paths:
            elems = []
            for x, _ in seq:
                if not elems or elems[-1] != x:
                    elems.append(x)
            if elems[0] != src:
                elems.insert(0, src)
            collapsed.append(elems)
        paths = collapsed
    return value, paths
