"""Internally-disjoint block-to-block paths in a 2-step graph."""

from __future__ import annotations

import itertools
from typing import Sequence

from tdnet.bigraph import BipartiteGraph
from tdnet.construct import ConstructedGraph
from tdnet.flow import INTERNAL, max_flow
from tdnet.routing import td32
from tdnet.routing.pathset import PathSet, RoutingError
from tdnet.routing.views import CopyView

_H0_CACHE: dict[tuple[int, str, str], tuple] = {}


def finish(paths, mode, count, bound, host, info, check, sources=None, destinations=None) -> PathSet:
    """Wrap paths in a PathSet and, when ``check`` is set, verify it before returning."""
    ps = PathSet(tuple(paths), mode, count, bound, host, info)
    if check:
        from tdnet.verify import check_pathset

        problems = check_pathset(ps, sources=sources, destinations=destinations)
        if problems:
            raise RoutingError(f"{info.get('case', 'routing')}: " + "; ".join(problems[:5]))
    return ps


# -- base-graph paths -----------------------------------------------------
def h0_disjoint_paths(h0: BipartiteGraph, q: str, q2: str) -> tuple[int, list[list[str]], int]:
    """``(lambda_count, paths, mu)`` for blocks ``q`` and ``q2`` of the base graph.

    ``lambda_count`` is the maximum number of internally-disjoint paths.
    ``paths`` holds two of them (one if that is all there is), picked to
    minimise ``mu``, the longest of the returned lengths.
    """
    if q == q2:
        raise RoutingError("blocks must differ")
    key = (id(h0), q, q2)
    hit = _H0_CACHE.get(key)
    if hit is not None and hit[0] is h0:
        return hit[1]
    lam, paths = max_flow(h0, q, q2, INTERNAL)
    if lam == 0:
        raise RoutingError(f"no path from {q!r} to {q2!r}")
    paths.sort(key=lambda p: (len(p), p))
    if lam >= 2:
        pair = min(itertools.combinations(paths, 2), key=lambda ab: (max(len(ab[0]), len(ab[1])), len(ab[0]) + len(ab[1])))
        chosen = sorted(pair, key=lambda p: (len(p), p))
    else:
        chosen = paths[:1]
    mu = max(len(p) - 1 for p in chosen)
    result = (lam, [list(p) for p in chosen], mu)
    if len(_H0_CACHE) > 100000:
        _H0_CACHE.clear()
    _H0_CACHE[key] = (h0, result)
    return result


def _shortcut(h0: BipartiteGraph, path: Sequence[str]) -> list[str]:
    """Trim a base path so its inner nodes touch neither end block."""
    q, q2 = path[0], path[-1]
    i = max(j for j in range(1, len(path) - 1, 2) if h0.adjacent(path[j], q))
    j = min(j for j in range(i, len(path) - 1, 2) if h0.adjacent(path[j], q2))
    return [q, *path[i:j + 1], q2]


def _transit(h: ConstructedGraph, hpath: Sequence[str], starts: Sequence[str], ends: Sequence[str]) -> list[list[str]]:
    """Parallel walks from ``starts`` (in G_{q1}) to ``ends`` (in G_{qa}) through the inner copies.

    Each hop moves between consecutive groups through one generated block;
    walks keep their position inside the group until the final hop.
    """
    nodes = hpath[1:-1:2]
    copies = hpath[2:-1:2]
    walks = [[x] for x in starts]
    for step, q in enumerate(copies):
        view = CopyView(h, q)
        last = step == len(copies) - 1
        nxt = nodes[step + 1]
        for w, end in zip(walks, ends):
            y = w[-1]
            z = end if last else h.node_at[(nxt, h.group_of_node[y][1])]
            w.extend([view.gen(y, z), z])
    for w, end in zip(walks, ends):
        if w[-1] != end:
            raise RoutingError("transit walk missed its end node")
    return walks


# -- same copy --------------------------------------------------------------
def one_to_one_same_copy(h: ConstructedGraph, b1: str, b2: str, *, check: bool = True) -> PathSet:
    """``delta`` internally-disjoint paths inside one copy ``T_Q``."""
    if b1 == b2:
        raise RoutingError("blocks must differ")
    q = h.copy_of(b1)
    if h.copy_of(b2) != q:
        raise RoutingError(f"{b1!r} and {b2!r} lie in different copies; use one_to_one")
    view = CopyView(h, q)
    r, s = view.roots(b1), view.roots(b2)
    diff = [i for i in range(view.delta) if r[i] != s[i]]
    b = len(diff)
    if b == 0:
        raise RoutingError("distinct blocks of a design cannot share every root")
    paths: dict[int, list[str]] = {i: [b1, r[i], b2] for i in range(view.delta) if r[i] == s[i]}
    if b == 1:
        i = diff[0]
        j = min(paths)
        x2 = next(x for x in view.groups[j] if x != r[j])
        paths[i] = [b1, r[i], view.gen(r[i], x2), x2, view.gen(s[i], x2), s[i], b2]
        bound = 6
    else:
        for m, i in enumerate(diff):
            nxt = diff[(m + 1) % b]
            paths[i] = [b1, r[i], view.gen(r[i], s[nxt]), s[nxt], b2]
        bound = 4
    info = {"case": "same-copy", "b": b, "short": True}
    out = [paths[i] for i in sorted(paths)]
    return finish(out, INTERNAL, view.delta, bound, view.host, info, check, [b1] * view.delta, [b2] * view.delta)


# -- cross copy -------------------------------------------------------------
def _align(h: ConstructedGraph, q: str, q2: str, resq: set[str], resq2: set[str], count: int) -> list[tuple[str, str]]:
    """Pairs (group in T_Q, group in T_Q') with shared base nodes given the same index, first."""
    nq = [p for p in h.roots_of_copy[q] if p not in resq]
    nq2 = [p for p in h.roots_of_copy[q2] if p not in resq2]
    common = [p for p in nq if p in nq2]
    rest = [p for p in nq if p not in common]
    rest2 = [p for p in nq2 if p not in common]
    pairs = [(p, p) for p in common] + list(zip(rest, rest2))
    if len(pairs) < count:
        raise RoutingError("not enough groups to pair")
    return pairs[:count]


def _pi_paths(h, vq, vq2, b1, b2, g0, pairs):
    """The copy-local paths through a shared group ``g0`` plus ``pairs`` of further groups.

    Returns ``(paths, used, (r, s))``: ``used`` lists nodes of the first
    pair's group taken by the exchange step, ``r``/``s`` the roots per pair.
    """
    ig, ig2 = vq.group_index_of(g0), vq2.group_index_of(g0)
    r0, s0 = vq.member(b1, ig), vq2.member(b2, ig2)
    grp = h.group(g0)
    if r0 == s0:
        t = w = [x for x in grp if x != r0]
    else:
        others = [x for x in grp if x not in (r0, s0)]
        t, w = [s0, *others], [r0, *others]
    r = [vq.member(b1, vq.group_index_of(p)) for p, _ in pairs]
    s = [vq2.member(b2, vq2.group_index_of(p2)) for _, p2 in pairs]

    def long(j: int) -> list[str]:
        if r[j] == s[j]:
            return [b1, r[j], b2]
        return [b1, r[j], vq.gen(r[j], t[j]), t[j], vq2.gen(s[j], w[j]), s[j], b2]

    used = []
    if r0 == s0:
        paths = [[b1, r0, b2]] + [long(j) for j in range(len(pairs))]
    else:
        if r[0] == s[0]:
            x1 = next(x for x in h.group(pairs[0][0]) if x != r[0])
            used.append(x1)
            p0 = [b1, r[0], b2]
            p1 = [b1, r0, vq.gen(r0, x1), x1, vq2.gen(s0, x1), s0, b2]
        else:
            p0 = [b1, r0, vq2.gen(s[0], w[0]), s[0], b2]
            p1 = [b1, r[0], vq.gen(r[0], t[0]), s0, b2]
        paths = [p0, p1] + [long(j) for j in range(1, len(pairs))]
    return paths, used, (r, s)


def _transit_bundle(h, vq, vq2, b1, b2, main, reserve_q, reserve_q2, m):
    """``m`` paths through the base path ``main``: out of T_Q, across, into T_Q'."""
    q1, qa = main[1], main[-2]
    pairs = _align(h, vq.q, vq2.q, {q1} | reserve_q, {qa} | reserve_q2, m - 1)
    r0 = vq.member(b1, vq.group_index_of(q1))
    s0 = vq2.member(b2, vq2.group_index_of(qa))
    t = [x for x in h.group(q1) if x != r0][: m - 1]
    w = [x for x in h.group(qa) if x != s0][: m - 1]
    heads = [[b1, r0]]
    tails = [[s0, b2]]
    for j, (p, p2) in enumerate(pairs):
        rj = vq.member(b1, vq.group_index_of(p))
        sj = vq2.member(b2, vq2.group_index_of(p2))
        heads.append([b1, rj, vq.gen(rj, t[j]), t[j]])
        tails.append([w[j], vq2.gen(sj, w[j]), sj, b2])
    walks = _transit(h, main, [hd[-1] for hd in heads], [tl[0] for tl in tails])
    return [hd[:-1] + wk + tl[1:] for hd, wk, tl in zip(heads, walks, tails)]


def _single_transit(h, vq, vq2, b1, b2, hpath):
    r = vq.member(b1, vq.group_index_of(hpath[1]))
    s = vq2.member(b2, vq2.group_index_of(hpath[-2]))
    walk = _transit(h, hpath, [r], [s])[0]
    return [b1, *walk, b2]


def _td32_paths(h, q, q2, b1, b2, common):
    """k = 2, delta = 3 with at least two shared neighbours, via the canonical design."""
    td = h.td
    v, v2 = h.origin_of_block[b1][1], h.origin_of_block[b2][1]
    iso, iso2 = td32.iso_to_canonical(td, v), td32.iso_to_canonical(td, v2)
    inv = {c: d for d, c in iso.items()}
    inv2 = {c: d for d, c in iso2.items()}

    def canon(qq, iso_, x):
        return iso_[h.to_design_node(qq, x)]

    def back(qq, inv_, c):
        d = inv_[c]
        if d in td.position:
            return h.from_design_node(qq, d)
        return h.block_at[(qq, d)]

    def local(qq, iso_, inv_, src, targets, forbidden):
        ct = frozenset(canon(qq, iso_, x) for x in targets)
        cf = canon(qq, iso_, forbidden) if forbidden is not None else None
        table = td32.disjoint_paths_to(ct, cf)
        if table is None:
            return None
        out = {}
        for x in targets:
            seq = [back(qq, inv_, c) for c in table[canon(qq, iso_, x)]]
            seq[0] = src
            out[x] = seq
        return out

    vq2 = CopyView(h, q2)
    if len(common) == 3:
        targets = vq2.roots(b2)
        side = local(q, iso, inv, b1, targets, None)
        if side is None:
            raise RoutingError("no path system in the [3,2] table")
        return [side[x] + [b2] for x in targets], "a-i-k2"
    pi, pj = common[:2]
    xi = vq2.member(b2, vq2.group_index_of(pi))
    xj = vq2.member(b2, vq2.group_index_of(pj))
    spare = [x for x in h.group(pi) + h.group(pj) if x not in (xi, xj)]
    for x in spare:
        y = next(z for z in spare if z != x)
        targets = [xi, xj, x]
        side = local(q, iso, inv, b1, targets, y)
        side2 = local(q2, iso2, inv2, b2, targets, y)
        if side is not None and side2 is not None:
            return [side[z] + side2[z][::-1][1:] for z in targets], "a-i-k2"
    return _rotation(h, q, q2, b1, b2, common), "a-i-k2-rotation"


def _rotation(h, q, q2, b1, b2, common):
    """Shift each root of ``b1`` onto a root of ``b2`` in another group.

    Used when both shared groups hold different roots, where no pair of
    copy-local path systems exists. The middle block is generated in
    whichever copy holds both nodes.
    """
    vq, vq2 = CopyView(h, q), CopyView(h, q2)
    gq = [p for p in h.roots_of_copy[q] if p in common] + [p for p in h.roots_of_copy[q] if p not in common]
    gq2 = [p for p in gq if p in common] + [p for p in h.roots_of_copy[q2] if p not in common]
    r = [vq.member(b1, vq.group_index_of(p)) for p in gq]
    s = [vq2.member(b2, vq2.group_index_of(p)) for p in gq2]
    n = len(gq)
    out = []
    for a in range(n):
        if a < len(common) and r[a] == s[a]:
            out.append([b1, r[a], b2])
    moving = [a for a in range(n) if not (a < len(common) and r[a] == s[a])]
    for m, a in enumerate(moving):
        bb = moving[(m + 1) % len(moving)]
        if a >= len(common) and bb >= len(common):
            raise RoutingError("rotation would join two unshared groups")
        view = vq if gq2[bb] in vq.index else vq2
        out.append([b1, r[a], view.gen(r[a], s[bb]), s[bb], b2])
    return out


def _fallback(host, b1, b2, paths):
    used = {x for p in paths for x in p[1:-1]}
    extra = host.shortest_path(b1, b2, blocked=used)
    if extra is None:
        raise RoutingError("no completing path avoids the others")
    return list(extra.elements)


def expected_one_to_one_count(h: ConstructedGraph, b1: str, b2: str) -> int:
    delta, k = h.td.delta, h.td.k
    q, q2 = h.copy_of(b1), h.copy_of(b2)
    if q == q2:
        return delta
    lam, _, _ = h0_disjoint_paths(h.base, q, q2)
    return delta if lam >= 2 else min(delta, k)


def one_to_one(h: ConstructedGraph, b1: str, b2: str, *, check: bool = True) -> PathSet:
    """Internally-disjoint paths between blocks of different copies.

    Returns ``delta`` paths when the base has two internally-disjoint paths
    between the copies' blocks, ``min(delta, k)`` otherwise.
    """
    q, q2 = h.copy_of(b1), h.copy_of(b2)
    if q == q2:
        raise RoutingError(f"{b1!r} and {b2!r} share the copy {q!r}; use one_to_one_same_copy")
    h0 = h.base
    delta, k = h.td.delta, h.td.k
    host = h.two_step_graph
    vq, vq2 = CopyView(h, q), CopyView(h, q2)
    lam, hpaths, mu = h0_disjoint_paths(h0, q, q2)
    common = [p for p in h.roots_of_copy[q] if p in vq2.index]
    full = delta == k + 1 and lam >= 2
    info = {"lambda": lam, "mu": mu, "common": len(common)}

    if full and len(common) >= 2:
        if k == 2:
            paths, tag = _td32_paths(h, q, q2, b1, b2, common)
            info.update(case=tag, short=True)
        else:
            info.update(case="a-i", short=True)
            same = [p for p in common if vq.member(b1, vq.group_index_of(p)) == vq2.member(b2, vq2.group_index_of(p))]
            p2 = same[0] if same else common[0]
            p1 = next(p for p in common if p != p2)
            pairs = _align(h, q, q2, {p1, p2}, {p1, p2}, k - 1)
            paths, used, (r, s) = _pi_paths(h, vq, vq2, b1, b2, p1, pairs)
            r02 = vq.member(b1, vq.group_index_of(p2))
            s02 = vq2.member(b2, vq2.group_index_of(p2))
            if r02 == s02:
                paths.append([b1, r02, b2])
            elif pairs and pairs[0][0] == pairs[0][1]:
                x = next(z for z in h.group(pairs[0][0]) if z not in (r[0], s[0], *used))
                paths.append([b1, r02, vq.gen(r02, x), x, vq2.gen(s02, x), s02, b2])
            else:
                info["case"] = "a-i-fallback"
                paths.append(_fallback(host, b1, b2, paths))
        bound = 6
    elif full and len(common) == 1:
        info.update(case="a-ii", short=False)
        p1 = common[0]
        detour = h0.shortest_path(q, q2, blocked=[p1])
        if detour is None:
            raise RoutingError("base has no path avoiding the shared neighbour")
        detour = _shortcut(h0, detour.elements)
        pairs = _align(h, q, q2, {p1, detour[1]}, {p1, detour[-2]}, k - 1)
        paths, _, _ = _pi_paths(h, vq, vq2, b1, b2, p1, pairs)
        paths.append(_single_transit(h, vq, vq2, b1, b2, detour))
        info["detour"] = len(detour) - 1
        bound = max(6, mu)
    elif full:
        info.update(case="a-iii", short=False)
        main, other = (_shortcut(h0, p) for p in hpaths)
        paths = _transit_bundle(h, vq, vq2, b1, b2, main, {other[1]}, {other[-2]}, k)
        paths.append(_single_transit(h, vq, vq2, b1, b2, other))
        bound = mu + 4
    else:
        m = min(delta, k)
        if common:
            info.update(case="a-iv-shared", short=True)
            g0 = common[0]
            pairs = _align(h, q, q2, {g0}, {g0}, m - 1)
            paths, _, _ = _pi_paths(h, vq, vq2, b1, b2, g0, pairs)
            bound = 6
        else:
            info.update(case="a-iv-transit", short=False)
            main = _shortcut(h0, hpaths[0])
            paths = _transit_bundle(h, vq, vq2, b1, b2, main, set(), set(), m)
            bound = mu + 4
    count = len(paths)
    expected = delta if lam >= 2 else min(delta, k)
    if count != expected:
        raise RoutingError(f"built {count} paths, expected {expected}")
    return finish(paths, INTERNAL, count, bound, host, info, check, [b1] * count, [b2] * count)


def one_to_one_any(h: ConstructedGraph, b1: str, b2: str, *, check: bool = True) -> PathSet:
    if h.copy_of(b1) == h.copy_of(b2):
        return one_to_one_same_copy(h, b1, b2, check=check)
    return one_to_one(h, b1, b2, check=check)
