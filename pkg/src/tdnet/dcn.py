"""Switch-centric DCNs from 3-step graphs (Methods A and B) and their sizes."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from tdnet.bigraph import BipartiteGraph, DisconnectedError, FormatError, GraphError, degree_profile
from tdnet.construct import ConstructedGraph


class DcnError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Dcn:
    servers: tuple[str, ...]
    level1_switches: tuple[str, ...]
    level2_switches: tuple[str, ...]
    links: tuple[tuple[str, str], ...]
    ports_per_switch: int
    level1_origin: dict[str, str] = field(default_factory=dict)
    level2_origin: dict[str, tuple[int, str]] = field(default_factory=dict)
    nonblocking: dict[str, bool] = field(default_factory=dict)
    _adj: dict[str, list[str]] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        adj: dict[str, list[str]] = {x: [] for x in self.servers + self.level1_switches + self.level2_switches}
        for a, b in self.links:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dcn):
            return NotImplemented
        return (
            self.servers == other.servers
            and self.level1_switches == other.level1_switches
            and self.level2_switches == other.level2_switches
            and set(map(frozenset, self.links)) == set(map(frozenset, other.links))
            and self.ports_per_switch == other.ports_per_switch
            and self.level1_origin == other.level1_origin
            and self.level2_origin == other.level2_origin
            and self.nonblocking == other.nonblocking
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def switches(self) -> tuple[str, ...]:
        return self.level1_switches + self.level2_switches

    def neighbours(self, x: str) -> list[str]:
        return self._adj[x]

    def degree(self, x: str) -> int:
        return len(self._adj[x])

    def server_links(self, switch: str) -> list[str]:
        servers = self._server_set()
        return [y for y in self._adj[switch] if y in servers]

    def _server_set(self) -> frozenset[str]:
        return frozenset(self.servers)

    def check(self) -> list[str]:
        """Structural problems: server-server links and over-subscribed ports."""
        problems = []
        servers = self._server_set()
        for a, b in self.links:
            if a in servers and b in servers:
                problems.append(f"server-server link {a!r}-{b!r}")
        for s in self.switches:
            if self.degree(s) > self.ports_per_switch:
                problems.append(f"switch {s!r} uses {self.degree(s)} > {self.ports_per_switch} ports")
        return problems


@dataclass(frozen=True)
class DcnCounts:
    servers: int
    level1: int
    level2: int
    ports: int
    diameter_bound: int

    @property
    def switches(self) -> int:
        return self.level1 + self.level2


def _graph_of(h: ConstructedGraph | BipartiteGraph) -> BipartiteGraph:
    return h.graph if isinstance(h, ConstructedGraph) else h


def method_a(hstar: ConstructedGraph | BipartiteGraph, c: int) -> Dcn:
    """Merge ``c`` copies at every node and hang ``rho = delta_ - c*Delta`` servers off it."""
    g = _graph_of(hstar)
    prof = degree_profile(g)
    if not (prof.regular and prof.uniform):
        raise DcnError("graph must be regular and uniform")
    Delta, rank = prof.d, prof.delta
    if not Delta < rank:
        raise DcnError(f"need node degree < block rank, got ({Delta}, {rank})")
    if c < 1:
        raise DcnError("c must be at least 1")
    rho = rank - c * Delta
    if rho <= 0:
        raise DcnError(f"rho = {rank} - {c}*{Delta} = {rho} leaves no room for servers")

    level1 = tuple(f"L1:{x}" for x in g.node_ids)
    level2 = tuple(f"L2:{b}#{i}" for i in range(c) for b in g.block_ids)
    servers = tuple(f"S:{x}#{j}" for x in g.node_ids for j in range(rho))
    links = []
    for i in range(c):
        for b in g.block_ids:
            for x in g.neighbours(b):
                links.append((f"L1:{x}", f"L2:{b}#{i}"))
    for x in g.node_ids:
        for j in range(rho):
            links.append((f"L1:{x}", f"S:{x}#{j}"))
    nonblocking = {s: True for s in level1}
    nonblocking.update({s: False for s in level2})
    return Dcn(
        servers,
        level1,
        level2,
        tuple(links),
        rank,
        level1_origin={f"L1:{x}": x for x in g.node_ids},
        level2_origin={f"L2:{b}#{i}": (i, b) for i in range(c) for b in g.block_ids},
        nonblocking=nonblocking,
    )


def method_b(d: Dcn) -> Dcn:
    """Pair level-1 switches in order and dual-home the surviving servers."""
    if len(d.level1_switches) % 2:
        raise DcnError("method B needs an even number of level-1 switches")
    servers = set(d.servers)
    for s in d.servers:
        if d.degree(s) != 1:
            raise DcnError("method B expects single-homed servers (a method A network)")
    hosted = {sw: [y for y in d.neighbours(sw) if y in servers] for sw in d.level1_switches}
    rhos = {len(v) for v in hosted.values()}
    if len(rhos) != 1:
        raise DcnError(f"level-1 switches carry differing server counts {sorted(rhos)}")
    rho = rhos.pop()
    order = {s: i for i, s in enumerate(d.servers)}

    removed: set[str] = set()
    new_links: list[tuple[str, str]] = []
    sw = d.level1_switches
    for a, b in zip(sw[0::2], sw[1::2]):
        ha = sorted(hosted[a], key=order.__getitem__)
        hb = sorted(hosted[b], key=order.__getitem__)
        cut_a, cut_b = rho // 2, rho - rho // 2
        removed.update(ha[len(ha) - cut_a:])
        removed.update(hb[len(hb) - cut_b:])
        for s in ha[: len(ha) - cut_a]:
            new_links.append((b, s))
        for s in hb[: len(hb) - cut_b]:
            new_links.append((a, s))
    links = [l for l in d.links if l[0] not in removed and l[1] not in removed] + new_links
    return Dcn(
        tuple(s for s in d.servers if s not in removed),
        d.level1_switches,
        d.level2_switches,
        tuple(links),
        d.ports_per_switch,
        level1_origin=dict(d.level1_origin),
        level2_origin=dict(d.level2_origin),
        nonblocking=dict(d.nonblocking),
    )


def dcn_counts(
    n: int,
    e: int,
    d: int,
    delta: int,
    k: int,
    iterations: int,
    c: int,
    method: str,
    line_diameter: int = 4,
) -> DcnCounts:
    """Closed-form sizes for a DCN over the 3-step graph of an ``(n, e, d, delta)`` base.

    ``method`` is ``"none"`` (every 3-step node is a server, every block a
    switch), ``"a"`` or ``"b"``.
    """
    if min(n, e, d, delta, k, iterations) < 1:
        raise DcnError("all parameters must be positive")
    if n * d != e * delta:
        raise DcnError(f"incidence count mismatch: n*d={n * d} but e*delta={e * delta}")
    rank = d * k**iterations
    n_star = e * k ** (2 * iterations)
    e_star = n * k**iterations
    method = method.lower()
    if method == "none":
        return DcnCounts(n_star, 0, e_star, rank, line_diameter)
    if method not in ("a", "b"):
        raise DcnError(f"unknown method {method!r}")
    rho = rank - c * delta
    if c < 1 or rho <= 0:
        raise DcnError(f"rho = {rank} - {c}*{delta} = {rho} must be positive")
    servers = n_star * rho
    if method == "b":
        if n_star % 2:
            raise DcnError("method B needs an even number of level-1 switches")
        servers //= 2
    return DcnCounts(servers, n_star, c * e_star, rank, line_diameter + 2)


FAT_TREE_ROW = ("Fat-Tree", 64, 6, 65536, 5120)


def table_qfz() -> list[tuple[str, int, int, int, int]]:
    """Rows ``(name, ports, diameter, servers, switches)`` of the 64-port comparison."""
    rows = [FAT_TREE_ROW]
    big = dict(n=855, e=855, d=8, delta=8, k=8, iterations=1)
    small = dict(n=80, e=80, d=4, delta=4, k=4, iterations=2)
    for name, params, c, method in [
        ("H*", big, 1, "none"),
        ("N_A^1(H*)", big, 1, "a"),
        ("N_A^2(H*)", big, 7, "a"),
        ("N_A^3(H*)", big, 4, "a"),
        ("N_B(H*)", big, 1, "b"),
        ("Hbar*", small, 1, "none"),
        ("N_A^1(Hbar*)", small, 1, "a"),
    ]:
        cnt = dcn_counts(**params, c=c, method=method)
        rows.append((name, cnt.ports, cnt.diameter_bound, cnt.servers, cnt.switches))
    return rows


def dcn_diameter(d: Dcn) -> int:
    """Exact largest server-to-server hop count.

    Servers with the same switch neighbourhood have identical distance
    profiles, so one BFS per distinct neighbourhood suffices.
    """
    servers = set(d.servers)
    if len(servers) < 2:
        return 0
    classes: dict[tuple[str, ...], list[str]] = {}
    for s in d.servers:
        classes.setdefault(tuple(sorted(d.neighbours(s))), []).append(s)
    best = 0
    for members in classes.values():
        src = members[0]
        dist = {src: 0}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in d.neighbours(u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        if not servers <= dist.keys():
            raise DisconnectedError("DCN is disconnected")
        far = max(dist[s] for s in servers if s != src)
        best = max(best, far)
    return best


# -- serialization -------------------------------------------------------
def to_dict(d: Dcn) -> dict[str, Any]:
    return {
        "servers": list(d.servers),
        "level1": list(d.level1_switches),
        "level2": list(d.level2_switches),
        "links": [list(l) for l in d.links],
        "ports": d.ports_per_switch,
        "level1_origin": d.level1_origin,
        "level2_origin": {k: list(v) for k, v in d.level2_origin.items()},
        "nonblocking": d.nonblocking,
    }


def from_dict(data: dict[str, Any]) -> Dcn:
    try:
        return Dcn(
            tuple(data["servers"]),
            tuple(data["level1"]),
            tuple(data["level2"]),
            tuple(tuple(l) for l in data["links"]),
            int(data["ports"]),
            level1_origin=dict(data.get("level1_origin", {})),
            level2_origin={k: (int(v[0]), v[1]) for k, v in data.get("level2_origin", {}).items()},
            nonblocking=dict(data.get("nonblocking", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad DCN file: {exc}") from None


def save(d: Dcn, path: str | Path) -> None:
    Path(path).write_text(json.dumps(to_dict(d), indent=1) + "\n")


def load(path: str | Path) -> Dcn:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return from_dict(data)


_SHAPES = {"server": "circle", "level1": "box", "level2": "hexagon"}


def export_dot(d: Dcn, path: str | Path | None = None) -> str:
    lines = ["graph DCN {"]
    for kind, ids in (("server", d.servers), ("level1", d.level1_switches), ("level2", d.level2_switches)):
        for x in ids:
            lines.append(f'  "{x}" [shape={_SHAPES[kind]}];')
    for a, b in d.links:
        lines.append(f'  "{a}" -- "{b}";')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
