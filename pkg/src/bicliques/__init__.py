"""Parallel maximal biclique enumeration with compact search state and k-level work stealing."""
from __future__ import annotations

from .compact import CompactArray, Direction
from .engine import Frame, SearchState, enumerate_serial, init_root_state
from .graph import BipartiteGraph, Side, load_edge_list, normalize_sides, random_bipartite
from .oracle import closure_enumerate, is_closed, reference_recursive_mbea
from .scheduler import GlobalTaskPool, RunResult, run_parallel
from .stats import PhaseBreakdown

__all__ = [
    "BipartiteGraph",
    "CompactArray",
    "Direction",
    "Frame",
    "GlobalTaskPool",
    "PhaseBreakdown",
    "RunResult",
    "SearchState",
    "Side",
    "closure_enumerate",
    "enumerate_serial",
    "init_root_state",
    "is_closed",
    "load_edge_list",
    "normalize_sides",
    "random_bipartite",
    "reference_recursive_mbea",
    "run_parallel",
]
