from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from tdnet.bigraph import AltPath, BipartiteGraph, GraphError

INTERNAL = "internal"
EDGE = "edge"


class RoutingError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class PathSet:
    """Paths with a claimed disjointness mode and length bound."""

    paths: tuple[AltPath, ...]
    mode: str
    claimed_count: int
    length_bound: int
    host: BipartiteGraph = field(repr=False)
    info: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "paths", tuple(p if isinstance(p, AltPath) else AltPath(tuple(p)) for p in self.paths)
        )
        if self.mode not in (INTERNAL, EDGE):
            raise RoutingError(f"unknown mode {self.mode!r}")

    def __len__(self) -> int:
        return len(self.paths)

    @property
    def max_length(self) -> int:
        return max((p.length for p in self.paths), default=0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "mode": self.mode,
            "claimed_count": self.claimed_count,
            "length_bound": self.length_bound,
            "paths": [list(p.elements) for p in self.paths],
            "info": {k: v for k, v in self.info.items() if isinstance(v, (int, str, float, bool))},
        }


@dataclass(frozen=True)
class Target:
    """One entry of a target multiset: a node or block reference."""

    ref: str
    is_block: bool


@dataclass(frozen=True)
class TargetMultiset:
    entries: tuple[Target, ...]

    @classmethod
    def of(cls, host: BipartiteGraph, refs) -> TargetMultiset:
        refs = list(refs)
        for r in refs:
            if r not in host:
                raise RoutingError(f"unknown target {r!r}")
        return cls(tuple(Target(r, host.is_block(r)) for r in refs))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    @property
    def refs(self) -> list[str]:
        return [t.ref for t in self.entries]
