"""Edge-disjoint one-to-many paths: inside a design, fan-in to a group, and over a 2-step graph."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from tdnet.bigraph import BipartiteGraph
from tdnet.construct import ConstructedGraph
from tdnet.flow import EDGE, INTERNAL
from tdnet.routing.one_to_one import finish
from tdnet.routing.pathset import RoutingError, TargetMultiset
from tdnet.routing.views import CopyView, DesignView, TdView
from tdnet.tdesign import TransversalDesign


def _view(t: TransversalDesign | DesignView) -> DesignView:
    return t if isinstance(t, DesignView) else TdView(t)


def _refs(targets) -> list[str]:
    return targets.refs if isinstance(targets, TargetMultiset) else list(targets)


def loop_erase(seq: Sequence[str]) -> list[str]:
    """Drop every closed detour so each element appears once."""
    out: list[str] = []
    pos: dict[str, int] = {}
    for x in seq:
        if x in pos:
            cut = pos[x]
            for y in out[cut + 1:]:
                del pos[y]
            del out[cut + 1:]
        else:
            pos[x] = len(out)
            out.append(x)
    return out


# -- inside one design ------------------------------------------------------
def _first(cands: Iterable[str], ok) -> str:
    for x in cands:
        if ok(x):
            return x
    raise RoutingError("no admissible choice left")


def _node_targets(v: DesignView, u: str, tn: list[str]) -> list[list[str]]:
    """Internally-disjoint paths from ``u`` to target nodes (repetitions allowed)."""
    D = v.delta
    r = v.roots(u)
    grp = [v.group_of(x) for x in tn]
    mult = [sum(1 for x in tn if x == r[j]) for j in range(D)]
    nonrooted = {j: [i for i, x in enumerate(tn) if grp[i] == j and x != r[j]] for j in range(D)}
    order = sorted(range(D), key=lambda j: (-len(nonrooted[j]), -mult[j], j))
    n1 = order[0]

    match: dict[int, int] = {}  # root group -> target index
    queue = order[1:]
    ptr = 0
    pending = []
    for g in order:
        for i in nonrooted[g]:
            while ptr < len(queue) and mult[queue[ptr]] > 0:
                ptr += 1
            if ptr < len(queue):
                if queue[ptr] == grp[i]:
                    raise RoutingError("matching paired a target with its own group's root")
                match[queue[ptr]] = i
                ptr += 1
            else:
                pending.append(i)

    if len(pending) > 1:
        raise RoutingError("more than one target left unmatched")
    sub = "i"
    if pending and grp[pending[0]] != n1:
        sub = "ii"
        if mult[n1]:
            raise RoutingError("first root is a target yet a target stayed unmatched")
        match[n1] = pending.pop()
    elif pending:
        sub = "iii"

    done = set(match.values())
    for j in range(D):
        if mult[j]:
            i = next(i for i, x in enumerate(tn) if x == r[j] and i not in done)
            match[j] = i
            done.add(i)

    paths: list[list[str] | None] = [None] * len(tn)
    for j, i in match.items():
        t = tn[i]
        paths[i] = [u, t] if t == r[j] else [u, r[j], v.gen(r[j], t), t]
    used_blocks = {u} | {p[2] for p in paths if p is not None and len(p) > 2}
    targets = set(tn)

    if sub == "iii":
        i = pending[0]
        tp, rn1 = tn[i], r[n1]
        n2 = order[1]
        x = _first(
            v.groups[n2],
            lambda x: x != r[n2] and x not in targets and v.gen(x, tp) not in used_blocks,
        )
        paths[i] = [u, rn1, v.gen(rn1, x), x, v.gen(x, tp), tp]
        return paths  # type: ignore[return-value]

    rest = [i for i in range(len(tn)) if paths[i] is None]
    free = [j for j in order if j not in match]
    if len(rest) != len(free):
        raise RoutingError("unmatched roots and targets do not balance")
    b = len(rest)
    if b == 0:
        return paths  # type: ignore[return-value]
    used_nodes = {x for p in paths if p is not None for x in p}
    if b == 1:
        i = rest[0]
        t2 = tn[i]
        if D == 2:
            n2 = order[1]
            xa = next(x for x in v.groups[n1] if x != r[n1])
            xb = next(x for x in v.groups[n2] if x != r[n2])
            paths[i] = [u, r[n2], v.gen(r[n2], xa), xa, v.gen(xa, xb), xb, v.gen(xb, r[n1]), t2]
            return paths  # type: ignore[return-value]
        rr = r[free[0]]
        c = v.group_of(t2)
        prefer = order[D - 1] if c == order[D - 2] else order[D - 2]
        groups = [prefer] + [g for g in order if g != prefer]
        cands = [x for g in groups if g not in (v.group_of(rr), c) for x in v.groups[g] if x != r[g]]

        def ok(x: str) -> bool:
            if x in targets or x in used_nodes:
                return False
            b1, b2 = v.gen(rr, x), v.gen(x, t2)
            return b1 != b2 and not ({b1, b2} & used_blocks)

        x = _first(cands, ok)
        paths[i] = [u, rr, v.gen(rr, x), x, v.gen(x, t2), t2]
        return paths  # type: ignore[return-value]

    # b >= 2: rotate the free roots onto the outstanding targets
    xs: list[str] = []
    bars: list[str] = []
    for m, j in enumerate(free):
        tau = tn[rest[m - 1]]  # x'_m feeds the target of the previous free root
        x = _first(
            v.groups[j],
            lambda x: x != r[j] and x not in targets and v.gen(x, tau) not in bars and v.gen(x, tau) not in used_blocks,
        )
        xs.append(x)
        bars.append(v.gen(x, tau))
    for m, j in enumerate(free):
        nx = xs[(m + 1) % b]
        t = tn[rest[m]]
        paths[rest[m]] = [u, r[j], v.gen(r[j], nx), nx, v.gen(nx, t), t]
    return paths  # type: ignore[return-value]


def one_to_many_td(t: TransversalDesign | DesignView, u: str, targets, *, check: bool = True):
    """``delta`` edge-disjoint paths of length at most 7 from block ``u`` to ``targets``.

    Targets may be nodes or blocks, with repetitions. When all are nodes the
    paths are also internally-disjoint.
    """
    v = _view(t)
    refs = _refs(targets)
    if v.delta > v.k:
        raise RoutingError(f"needs delta <= k, got [{v.delta},{v.k}]")
    if len(refs) != v.delta:
        raise RoutingError(f"need exactly {v.delta} targets, got {len(refs)}")
    if not v.has_block(u):
        raise RoutingError(f"{u!r} is not a block of the design")
    for x in refs:
        if not v.contains(x):
            raise RoutingError(f"target {x!r} is not in the design")
        if x == u:
            raise RoutingError("a target equals the source block")

    node_idx = [i for i, x in enumerate(refs) if v.has_node(x)]
    block_idx = [i for i, x in enumerate(refs) if v.has_block(x)]
    if not block_idx:
        paths = _node_targets(v, u, refs)
        case = "nodes"
    else:
        r = v.roots(u)
        taken = {v.group_of(refs[i]) for i in node_idx}
        free = [j for j in range(v.delta) if j not in taken]
        proxy = list(refs)
        via_root: dict[int, str] = {}
        via_member: dict[int, str] = {}
        for i in block_idx:
            blk = refs[i]
            j = next((j for j in free if v.member(blk, j) == r[j]), None)
            if j is not None:
                free.remove(j)
                proxy[i] = r[j]
                via_root[i] = blk
        for i in block_idx:
            if i in via_root:
                continue
            if not free:
                raise RoutingError("ran out of target-free groups for block targets")
            j = free.pop(0)
            proxy[i] = v.member(refs[i], j)
            via_member[i] = refs[i]
        paths = _node_targets(v, u, proxy)
        for i, blk in via_root.items():
            if paths[i] != [u, proxy[i]]:
                raise RoutingError("root proxy did not get a direct path")
            paths[i] = [u, proxy[i], blk]
        for i, blk in via_member.items():
            p = paths[i]
            paths[i] = p[: p.index(blk) + 1] if blk in p else p + [blk]
        case = "mixed"
    info = {"case": case}
    return finish(paths, EDGE, v.delta, 7, v.host, info, check, [u] * v.delta, refs)


def fan_in_td(t: TransversalDesign | DesignView, d0: int, targets, *, check: bool = True):
    """Distinct sources in group ``d0`` with internally-disjoint paths (length <= 3) onto ``targets``.

    Returns ``(sources, pathset)``; ``sources[i]`` starts the path to ``targets[i]``.
    """
    v = _view(t)
    refs = _refs(targets)
    if v.delta > v.k:
        raise RoutingError(f"needs delta <= k, got [{v.delta},{v.k}]")
    if not 1 <= len(refs) <= v.delta:
        raise RoutingError(f"need between 1 and {v.delta} targets, got {len(refs)}")
    if not 0 <= d0 < v.delta:
        raise RoutingError(f"no group {d0}")
    for x in refs:
        if not v.contains(x):
            raise RoutingError(f"target {x!r} is not in the design")
        if v.has_node(x) and v.group_of(x) == d0:
            raise RoutingError(f"target node {x!r} lies in the source group")

    node_idx = [i for i, x in enumerate(refs) if v.has_node(x)]
    block_idx = [i for i, x in enumerate(refs) if v.has_block(x)]
    paths: list[list[str] | None] = [None] * len(refs)

    anchor = {i: v.member(refs[i], d0) for i in block_idx}
    reps: dict[str, str] = {}  # d0 node -> representative block
    extra = []
    for i in block_idx:
        x = anchor[i]
        if x not in reps:
            reps[x] = refs[i]
            paths[i] = [x, refs[i]]
        else:
            extra.append(i)
    busy = {v.group_of(refs[i]) for i in node_idx} | {d0}
    fresh = [g for g in range(v.delta) if g not in busy]
    if len(fresh) < len(extra):
        raise RoutingError(f"renaming needs {len(extra)} target-free groups, only {len(fresh)} exist")
    spare = [x for x in v.groups[d0] if x not in reps]
    if len(spare) < len(extra) + len(node_idx):
        raise RoutingError("source group too small")
    for i, g in zip(extra, fresh):
        x = spare.pop(0)
        blk = refs[i]
        rr = v.member(blk, g)
        paths[i] = [x, v.gen(x, rr), rr, blk]
    for i in node_idx:
        x = spare.pop(0)
        paths[i] = [x, v.gen(x, refs[i]), refs[i]]
    sources = [p[0] for p in paths]  # type: ignore[index]
    info = {"case": "fan-in", "classes": len(reps)}
    ps = finish(paths, INTERNAL, len(refs), 3, v.host, info, check, sources, refs)
    return sources, ps


# -- skeleton ---------------------------------------------------------------
@dataclass(frozen=True)
class SkeletonTree:
    root: str
    parent: dict[str, str | None]
    children: dict[str, tuple[str, ...]]
    mu: dict[str, int]
    depth: dict[str, int]

    @property
    def h(self) -> int:
        return max(self.depth.values())

    def elements(self) -> list[str]:
        return list(self.parent)


def build_skeleton(h0: BipartiteGraph, q0: str, qs: Iterable[str]) -> SkeletonTree:
    """BFS tree from ``q0`` pruned to the blocks in ``qs`` (a multiset; counts feed ``mu``)."""
    counts = Counter(qs)
    for q in counts:
        if not h0.is_block(q):
            raise RoutingError(f"{q!r} is not a block")
    tree = h0.bfs_tree(q0)
    keep: dict[str, str | None] = {q0: None}
    for q in counts:
        if q not in tree:
            raise RoutingError(f"{q!r} is unreachable from {q0!r}")
        x = q
        while x not in keep:
            keep[x] = tree[x]
            x = tree[x]
    order = sorted(keep, key=h0.order_key)
    children: dict[str, list[str]] = {x: [] for x in order}
    for x in order:
        if keep[x] is not None:
            children[keep[x]].append(x)
    depth = {q0: 0}
    stack = [q0]
    seq = []
    while stack:
        x = stack.pop()
        seq.append(x)
        for c in children[x]:
            depth[c] = depth[x] + 1
            stack.append(c)
    mu: dict[str, int] = {}
    for x in reversed(seq):
        mu[x] = counts.get(x, 0) + sum(mu[c] for c in children[x])
    return SkeletonTree(q0, keep, {x: tuple(c) for x, c in children.items()}, mu, depth)


def one_to_many(h: ConstructedGraph, b: str, targets: Sequence[str], *, check: bool = True):
    """``delta`` edge-disjoint paths from block ``b`` to a multiset of ``delta`` blocks."""
    delta, k = h.td.delta, h.td.k
    if delta > k:
        raise RoutingError(f"needs delta <= k, got [{delta},{k}]")
    targets = _refs(targets)
    if len(targets) != delta:
        raise RoutingError(f"need exactly {delta} targets, got {len(targets)}")
    host = h.two_step_graph
    for t in targets:
        if t not in host or not host.is_block(t):
            raise RoutingError(f"{t!r} is not a block")
        if t == b:
            raise RoutingError("a target equals the source block")
    q0 = h.copy_of(b)
    z = build_skeleton(h.base, q0, [h.copy_of(t) for t in targets])
    by_copy: dict[str, list[int]] = {}
    for i, t in enumerate(targets):
        by_copy.setdefault(h.copy_of(t), []).append(i)

    def lifted(q: str) -> list[tuple[str, list[str], int]]:
        """Items re-rooted at the parent node of the non-root block ``q``."""
        below = [it for p in z.children[q] for c in z.children[p] for it in lifted(c)]
        mine = [(targets[i], [targets[i]], i) for i in by_copy.get(q, [])]
        pending = below + mine
        view = CopyView(h, q)
        d0 = view.group_index_of(z.parent[q])
        sources, ps = fan_in_td(view, d0, [it[0] for it in pending], check=check)
        return [(s, list(p.elements) + it[1][1:], it[2]) for s, p, it in zip(sources, ps.paths, pending)]

    pending = [it for p in z.children[q0] for c in z.children[p] for it in lifted(c)]
    pending += [(targets[i], [targets[i]], i) for i in by_copy.get(q0, [])]
    root = one_to_many_td(CopyView(h, q0), b, [it[0] for it in pending], check=check)
    paths: list[list[str] | None] = [None] * delta
    for p, it in zip(root.paths, pending):
        paths[it[2]] = loop_erase(list(p.elements) + it[1][1:])
    bound = 3 * z.h // 2 + 7
    info = {"case": "skeleton", "h": z.h, "copies": len(by_copy)}
    return finish(paths, EDGE, delta, bound, host, info, check, [b] * delta, targets)
