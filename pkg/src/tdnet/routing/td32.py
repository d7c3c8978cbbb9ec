"""Path table for the unique [3,2] design, searched once on the canonical labelling."""

from __future__ import annotations

from functools import lru_cache

from tdnet.routing.pathset import RoutingError
from tdnet.tdesign import TransversalDesign, canonical_td_3_2, find_isomorphism

SOURCE = "B1"


@lru_cache(maxsize=1)
def _all_paths() -> tuple[tuple[str, ...], ...]:
    """Every simple alternating path starting at the source block."""
    g = canonical_td_3_2().graph
    out = []

    def walk(path: list[str], seen: set[str]) -> None:
        for y in g.neighbours(path[-1]):
            if y not in seen:
                path.append(y)
                seen.add(y)
                out.append(tuple(path))
                walk(path, seen)
                path.pop()
                seen.discard(y)

    walk([SOURCE], {SOURCE})
    return tuple(p for p in out if len(p) % 2 == 0)  # ends at a node


@lru_cache(maxsize=None)
def disjoint_paths_to(targets: frozenset[str], forbidden: str | None = None) -> dict[str, tuple[str, ...]] | None:
    """Internally-disjoint paths from ``B1`` to three distinct nodes of the canonical design.

    Minimises the longest path, then the total length; ``forbidden`` is a
    node no path may visit. ``None`` if no such system exists.
    """
    order = sorted(targets)
    if len(order) != 3:
        raise RoutingError("need exactly three distinct target nodes")
    cands = []
    for t in order:
        ok = [
            p for p in _all_paths()
            if p[-1] == t and forbidden not in p and not (set(p[1:-1]) & targets)
        ]
        cands.append(sorted(ok, key=lambda p: (len(p), p)))
    best = None
    for a in cands[0]:
        ia = set(a[1:-1])
        for b in cands[1]:
            ib = set(b[1:-1])
            if ia & ib:
                continue
            for c in cands[2]:
                if set(c[1:-1]) & (ia | ib):
                    continue
                key = (max(len(a), len(b), len(c)), len(a) + len(b) + len(c), (a, b, c))
                if best is None or key < best[0]:
                    best = (key, (a, b, c))
    if best is None:
        return None
    return dict(zip(order, best[1]))


@lru_cache(maxsize=None)
def _iso_cached(t: TransversalDesign, block: str) -> dict[str, str]:
    iso = find_isomorphism(t, canonical_td_3_2(), fix={block: SOURCE})
    if iso is None:
        raise RoutingError("design is not isomorphic to the canonical [3,2] design")
    return iso


def iso_to_canonical(t: TransversalDesign, block: str) -> dict[str, str]:
    """An isomorphism onto the canonical design sending ``block`` to ``B1``."""
    return _iso_cached(t, block)
