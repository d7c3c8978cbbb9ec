"""Independent checks: disjointness validators, Menger counts, design
enumeration and whole-theorem sweeps."""

from __future__ import annotations

import itertools
import logging
import math
import random
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

from tdnet.bigraph import BipartiteGraph, validate_path
from tdnet.flow import EDGE, INTERNAL, max_flow

log = logging.getLogger(__name__)

DEFAULT_SEED = 20150817


def assert_disjoint(ps) -> list[str]:
    """Violations of the path set's disjointness mode (empty list = holds)."""
    report = []
    paths = [tuple(p.elements) for p in ps.paths]
    if ps.mode == INTERNAL:
        ends = {p[0] for p in paths} | {p[-1] for p in paths}
        seen: dict[str, int] = {}
        for i, p in enumerate(paths):
            for x in p[1:-1]:
                if x in ends:
                    report.append(f"path {i}: endpoint {x!r} appears as an interior element")
                if x in seen and seen[x] != i:
                    report.append(f"paths {seen[x]} and {i} share interior element {x!r}")
                seen.setdefault(x, i)
    elif ps.mode == EDGE:
        seen_e: dict[frozenset, int] = {}
        for i, p in enumerate(paths):
            for a, b in zip(p, p[1:]):
                e = frozenset((a, b))
                if e in seen_e:
                    report.append(f"paths {seen_e[e]} and {i} share the incidence {a!r}-{b!r}")
                else:
                    seen_e[e] = i
    else:
        report.append(f"unknown mode {ps.mode!r}")
    return report


def check_pathset(ps, *, sources: Sequence[str] | None = None, destinations: Sequence[str] | None = None) -> list[str]:
    """Every invariant of a path set: count, validity, length bound, disjointness.

    ``sources``/``destinations`` (multisets, order-free) pin the endpoints.
    """
    report = []
    if len(ps.paths) != ps.claimed_count:
        report.append(f"{len(ps.paths)} paths but {ps.claimed_count} claimed")
    for i, p in enumerate(ps.paths):
        if not validate_path(ps.host, p):
            report.append(f"path {i} is not a valid alternating path: {list(p.elements)}")
        if p.length > ps.length_bound:
            report.append(f"path {i} has length {p.length} > bound {ps.length_bound}")
    if sources is not None and Counter(p.source for p in ps.paths) != Counter(sources):
        report.append("path sources differ from the requested ones")
    if destinations is not None and Counter(p.destination for p in ps.paths) != Counter(destinations):
        report.append("path destinations differ from the requested ones")
    report.extend(assert_disjoint(ps))
    return report


@dataclass(frozen=True)
class MengerQuery:
    host: BipartiteGraph
    source: str
    sink: str
    mode: str = INTERNAL

    def __post_init__(self) -> None:
        if self.source == self.sink:
            raise ValueError("source and sink must differ")
        if self.source not in self.host or self.sink not in self.host:
            raise ValueError("terminals must belong to the host")


def menger_count(q: MengerQuery | BipartiteGraph, source: str | None = None, sink: str | None = None, mode: str = INTERNAL) -> int:
    """Maximum number of disjoint ``source``-``sink`` paths (exact, via max-flow)."""
    if not isinstance(q, MengerQuery):
        q = MengerQuery(q, source, sink, mode)
    value, _ = max_flow(q.host, q.source, q.sink, q.mode)
    return value


# -- [3,2] design enumeration -------------------------------------------
def _td32_canonical_form(blocks: Sequence[tuple[int, int, int]]) -> tuple:
    """Smallest relabelled block multiset over group permutations and in-group swaps."""
    best = None
    for perm in itertools.permutations(range(3)):
        for flips in itertools.product((0, 1), repeat=3):
            img = sorted(tuple(b[perm[i]] ^ flips[i] for i in range(3)) for b in blocks)
            img = tuple(img)
            if best is None or img < best:
                best = img
    return best


def enumerate_td_3_2_details() -> dict[str, Any]:
    """Search every labelled incidence structure with groups {r_i, s_i} and blocks B1..B4.

    A block meeting each group exactly once is a choice vector in {0,1}^3
    (0 = r_i, 1 = s_i), so the raw space is 8**4 labelled block lists.
    """
    vectors = list(itertools.product((0, 1), repeat=3))
    raw = 0
    valid = []
    for blocks in itertools.product(vectors, repeat=4):
        raw += 1
        ok = True
        for gi, gj in itertools.combinations(range(3), 2):
            for a in (0, 1):
                for b in (0, 1):
                    if sum(1 for v in blocks if v[gi] == a and v[gj] == b) != 1:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            valid.append(blocks)
    classes = {_td32_canonical_form(b) for b in valid}
    log.info("[3,2] enumeration: %d raw candidates, %d valid, %d classes", raw, len(valid), len(classes))
    return {"raw": raw, "valid": valid, "classes": sorted(classes)}


def enumerate_td_3_2() -> int:
    return len(enumerate_td_3_2_details()["classes"])


def td32_from_vectors(blocks: Sequence[tuple[int, int, int]]):
    """Turn a block-vector list into a TransversalDesign over r_i/s_i, B1..B4."""
    from tdnet.tdesign import TransversalDesign

    groups = (("r1", "s1"), ("r2", "s2"), ("r3", "s3"))
    edges = []
    for j, v in enumerate(blocks):
        for i in range(3):
            edges.append((groups[i][v[i]], f"B{j + 1}"))
    g = BipartiteGraph([x for grp in groups for x in grp], [f"B{j + 1}" for j in range(len(blocks))], edges)
    return TransversalDesign(3, 2, groups, g)


# -- sweeps ---------------------------------------------------------------
@dataclass
class SweepReport:
    instance: str
    theorem: int
    pairs_tested: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    max_runtime: float = 0.0
    seed: int | None = None
    length_histogram: dict[int, int] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "theorem": self.theorem,
            "pairs_tested": self.pairs_tested,
            "failures": self.failures,
            "passed": self.passed,
            "max_runtime": round(self.max_runtime, 6),
            "seed": self.seed,
            "length_histogram": {str(k): v for k, v in sorted(self.length_histogram.items())},
            "counts": self.counts,
        }

    def merge(self, item: dict[str, Any]) -> None:
        self.pairs_tested += 1
        self.max_runtime = max(self.max_runtime, item["runtime"])
        for ln in item.get("lengths", ()):
            self.length_histogram[ln] = self.length_histogram.get(ln, 0) + 1
        for key in item.get("tags", ()):
            self.counts[key] = self.counts.get(key, 0) + 1
        if item.get("problems"):
            self.failures.append({"query": item["query"], "problems": item["problems"], "witness": item.get("witness")})


def _theorem2_item(h, b1: str, b2: str) -> dict[str, Any]:
    from tdnet.routing import expected_one_to_one_count, one_to_one_any

    t0 = time.perf_counter()
    problems: list[str] = []
    witness = None
    lengths: list[int] = []
    tags: list[str] = []
    try:
        ps = one_to_one_any(h, b1, b2, check=False)
    except Exception as exc:  # a failing construction branch is reported, never raised
        problems.append(f"{type(exc).__name__}: {exc}")
        ps = None
    if ps is not None:
        witness = [list(p.elements) for p in ps.paths]
        lengths = [p.length for p in ps.paths]
        tags.append(str(ps.info.get("case")))
        problems += check_pathset(ps, sources=[b1] * len(ps.paths), destinations=[b2] * len(ps.paths))
        expected = expected_one_to_one_count(h, b1, b2)
        if ps.claimed_count != expected:
            problems.append(f"claimed {ps.claimed_count} paths, theorem promises {expected}")
        mu = ps.info.get("mu")
        if mu is not None and ps.max_length > mu + 4:
            problems.append(f"length {ps.max_length} exceeds mu+4 = {mu + 4}")
        if ps.info.get("short") and ps.max_length > 6:
            problems.append(f"length {ps.max_length} exceeds 6 in case {ps.info.get('case')}")
        m = menger_count(h.two_step_graph, b1, b2, INTERNAL)
        if m != ps.claimed_count:
            problems.append(f"Menger count {m} differs from claimed {ps.claimed_count}")
    return {
        "query": [b1, b2],
        "problems": problems,
        "witness": witness,
        "runtime": time.perf_counter() - t0,
        "lengths": lengths,
        "tags": tags,
    }


_WORKER_H = None


def _init_worker(h) -> None:
    global _WORKER_H
    _WORKER_H = h


def _theorem2_chunk(pairs):
    return [_theorem2_item(_WORKER_H, a, b) for a, b in pairs]


def _describe(h) -> str:
    g = h.two_step_graph
    return f"2-step graph: {g.n} nodes, {g.e} blocks, design [{h.td.delta},{h.td.k}], base {h.base.n}x{h.base.e}"


def sweep_theorem2(h, *, jobs: int = 1, pairs: Sequence[tuple[str, str]] | None = None) -> SweepReport:
    """Build, validate and Menger-check the one-to-one paths of every ordered block pair."""
    g = h.two_step_graph
    if pairs is None:
        pairs = [(a, b) for a in g.block_ids for b in g.block_ids if a != b]
    report = SweepReport(_describe(h), 2)
    if jobs <= 1:
        items = [_theorem2_item(h, a, b) for a, b in pairs]
    else:
        size = max(1, math.ceil(len(pairs) / (jobs * 4)))
        chunks = [pairs[i:i + size] for i in range(0, len(pairs), size)]
        with ProcessPoolExecutor(jobs, initializer=_init_worker, initargs=(h,)) as ex:
            items = [it for chunk in ex.map(_theorem2_chunk, chunks) for it in chunk]
    for it in items:
        report.merge(it)
    return report


def sweep_theorem5(h, trials: int = 1000, *, seed: int = DEFAULT_SEED) -> SweepReport:
    """Random source blocks and random target multisets of size Delta."""
    from tdnet.routing import one_to_many

    g = h.two_step_graph
    rng = random.Random(seed)
    report = SweepReport(_describe(h), 5, seed=seed)
    blocks = list(g.block_ids)
    delta = h.td.delta
    for _ in range(trials):
        src = rng.choice(blocks)
        targets = [rng.choice([b for b in blocks if b != src]) for _ in range(delta)]
        t0 = time.perf_counter()
        problems: list[str] = []
        witness = None
        lengths: list[int] = []
        try:
            ps = one_to_many(h, src, targets, check=False)
            witness = [list(p.elements) for p in ps.paths]
            lengths = [p.length for p in ps.paths]
            problems += check_pathset(ps, sources=[src] * delta, destinations=targets)
            if ps.mode != EDGE:
                problems.append("expected an edge-disjoint path set")
            bound = 3 * ps.info["h"] / 2 + 7
            if ps.max_length > bound:
                problems.append(f"length {ps.max_length} exceeds 3h/2+7 = {bound}")
        except Exception as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        report.merge(
            {"query": [src, targets], "problems": problems, "witness": witness,
             "runtime": time.perf_counter() - t0, "lengths": lengths}
        )
    return report


def _random_targets(rng: random.Random, t, count: int, *, nodes_only: bool = False) -> list[str]:
    pool = list(t.graph.node_ids) if nodes_only else list(t.graph.elements())
    return [rng.choice(pool) for _ in range(count)]


def sweep_theorem3(t, trials: int = 1000, *, seed: int = DEFAULT_SEED) -> SweepReport:
    """Random source block and ``delta`` random node/block targets inside one design.

    Every third trial draws node-only targets, which must also be internally-disjoint.
    """
    from tdnet.routing import one_to_many_td

    rng = random.Random(seed)
    report = SweepReport(f"design [{t.delta},{t.k}]", 3, seed=seed)
    for trial in range(trials):
        u = rng.choice(t.blocks)
        nodes_only = trial % 3 == 0
        while True:
            targets = _random_targets(rng, t, t.delta, nodes_only=nodes_only)
            if u not in targets:
                break
        t0 = time.perf_counter()
        problems: list[str] = []
        witness = None
        lengths: list[int] = []
        tags = ["nodes-only" if nodes_only or all(t.graph.is_node(x) for x in targets) else "mixed"]
        try:
            ps = one_to_many_td(t, u, targets, check=False)
            witness = [list(p.elements) for p in ps.paths]
            lengths = [p.length for p in ps.paths]
            problems += check_pathset(ps, sources=[u] * t.delta, destinations=targets)
            if ps.max_length > 7:
                problems.append(f"length {ps.max_length} > 7")
            if tags[0] == "nodes-only":
                internal = type(ps)(ps.paths, INTERNAL, ps.claimed_count, ps.length_bound, ps.host)
                problems += [f"internal: {p}" for p in assert_disjoint(internal)]
        except Exception as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
        report.merge({"query": [u, targets], "problems": problems, "witness": witness,
                      "runtime": time.perf_counter() - t0, "lengths": lengths, "tags": tags})
    return report


def sweep_theorem4(t, trials: int = 1000, *, seed: int = DEFAULT_SEED) -> SweepReport:
    """Random fan-ins of at most ``delta`` targets into a target-free group."""
    from tdnet.routing import RoutingError, fan_in_td

    rng = random.Random(seed)
    report = SweepReport(f"design [{t.delta},{t.k}]", 4, seed=seed)
    done = 0
    attempts = 0
    while done < trials:
        attempts += 1
        d0 = rng.randrange(t.delta)
        size = rng.randint(1, t.delta)
        pool = [x for x in t.graph.elements() if not (t.graph.is_node(x) and t.group_of(x) == d0)]
        targets = [rng.choice(pool) for _ in range(size)]
        t0 = time.perf_counter()
        problems: list[str] = []
        witness = None
        lengths: list[int] = []
        try:
            sources, ps = fan_in_td(t, d0, targets, check=False)
        except RoutingError as exc:
            if "renaming" in str(exc):
                # hypothesis of the construction not met; not a trial
                continue
            problems.append(f"{type(exc).__name__}: {exc}")
            ps = None
        except Exception as exc:
            problems.append(f"{type(exc).__name__}: {exc}")
            ps = None
        if ps is not None:
            witness = [list(p.elements) for p in ps.paths]
            lengths = [p.length for p in ps.paths]
            if len(set(sources)) != len(sources) or any(t.group_of(s) != d0 for s in sources):
                problems.append("sources are not distinct members of the chosen group")
            problems += check_pathset(ps, sources=sources, destinations=targets)
            if ps.max_length > 3:
                problems.append(f"length {ps.max_length} > 3")
        done += 1
        report.merge({"query": [d0, targets], "problems": problems, "witness": witness,
                      "runtime": time.perf_counter() - t0, "lengths": lengths})
    report.counts["attempts"] = attempts
    return report
