"""Constructive disjoint-path builders over designs and 2-step graphs."""

from __future__ import annotations

from tdnet.routing.one_to_many import (
    SkeletonTree,
    build_skeleton,
    fan_in_td,
    loop_erase,
    one_to_many,
    one_to_many_td,
)
from tdnet.routing.one_to_one import (
    expected_one_to_one_count,
    h0_disjoint_paths,
    one_to_one,
    one_to_one_any,
    one_to_one_same_copy,
)
from tdnet.routing.pathset import EDGE, INTERNAL, PathSet, RoutingError, Target, TargetMultiset
from tdnet.routing.views import CopyView, DesignView, TdView, lemma1_generate

__all__ = [
    "EDGE",
    "INTERNAL",
    "CopyView",
    "DesignView",
    "PathSet",
    "RoutingError",
    "SkeletonTree",
    "Target",
    "TargetMultiset",
    "TdView",
    "build_skeleton",
    "expected_one_to_one_count",
    "fan_in_td",
    "h0_disjoint_paths",
    "lemma1_generate",
    "loop_erase",
    "one_to_many",
    "one_to_many_td",
    "one_to_one",
    "one_to_one_any",
    "one_to_one_same_copy",
]
