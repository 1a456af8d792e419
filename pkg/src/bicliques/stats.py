"""Per-worker phase timing and workload reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

# Search phases, in the order they run inside one search node.
CANDIDATE_SELECTION = "candidate_selection"
L_CONSTRUCTION = "l_construction"
MAXIMALITY_CHECKING = "maximality_checking"
MAXIMAL_EXPANSION = "maximal_expansion"
# Scheduling and leftover buckets.
SUBTREE_FETCHING = "subtree_fetching"
WORK_STEALING = "work_stealing"
IDLE = "idle"
OTHER = "other"

PHASES = (
    CANDIDATE_SELECTION,
    L_CONSTRUCTION,
    MAXIMALITY_CHECKING,
    MAXIMAL_EXPANSION,
    SUBTREE_FETCHING,
    WORK_STEALING,
    IDLE,
    OTHER,
)
SEARCH_PHASES = PHASES[:4]


@dataclass
class PhaseBreakdown:
    """Accumulated nanoseconds per phase plus exact work counters for one worker.

    ``idle`` is wall-clock time spent blocked; every other phase is measured
    on the worker thread's CPU clock, so time slices taken by other workers
    do not leak into it.
    """

    worker_id: int = 0
    phases: dict[str, int] = field(default_factory=lambda: dict.fromkeys(PHASES, 0))
    subtrees_executed: int = 0
    bicliques_emitted: int = 0
    tasks_stolen: int = 0
    wall_ns: int = 0
    peak_slots: int = 0
    peak_depth: int = 0

    def record_phase(self, phase: str, duration: int) -> None:
        if duration < 0:
            raise ValueError("duration must be >= 0")
        self.phases[phase] += duration

    @property
    def busy_ns(self) -> int:
        return sum(v for k, v in self.phases.items() if k != IDLE)

    @property
    def total_ns(self) -> int:
        return sum(self.phases.values())

    def to_dict(self) -> dict:
        return {
            "id": self.worker_id,
            "phases": dict(self.phases),
            "subtrees": self.subtrees_executed,
            "emitted": self.bicliques_emitted,
            "stolen": self.tasks_stolen,
            "wall_ns": self.wall_ns,
            "peak_slots": self.peak_slots,
            "peak_depth": self.peak_depth,
        }


def record_phase(b: PhaseBreakdown, phase: str, duration: int) -> None:
    b.record_phase(phase, duration)


def distribution(values) -> dict[str, float]:
    """min/quartiles/max/stddev of per-worker times normalized to their mean."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return dict.fromkeys(("min", "q1", "median", "q3", "max", "stddev", "max_over_mean"), 0.0)
    mean = arr.mean()
    norm = arr / mean if mean > 0 else np.ones_like(arr)
    q1, median, q3 = np.percentile(norm, [25, 50, 75])
    return {
        "min": float(norm.min()),
        "q1": float(q1),
        "median": float(median),
        "q3": float(q3),
        "max": float(norm.max()),
        "stddev": float(norm.std()),
        "max_over_mean": float(norm.max()),
    }


def imbalance(workers: list[PhaseBreakdown]) -> float:
    """max/mean per-worker busy time (1.0 means perfectly even)."""
    return distribution([w.busy_ns for w in workers])["max_over_mean"]


def report(workers: list[PhaseBreakdown], *, dataset: str = "", n_u: int = 0, n_v: int = 0,
           edges: int = 0, count: int = 0, n_workers: int | None = None, k: int = 0,
           wall_ms: float = 0.0) -> dict:
    """Assemble the JSON-ready run report.

    ``distribution`` uses busy time (idle excluded); ``distribution_with_idle``
    uses every recorded phase.
    """
    totals = dict.fromkeys(PHASES, 0)
    for w in workers:
        for name, ns in w.phases.items():
            totals[name] += ns
    grand = sum(totals.values())
    percentages = {name: (100.0 * ns / grand if grand else 0.0) for name, ns in totals.items()}
    return {
        "dataset": dataset,
        "n_u": n_u,
        "n_v": n_v,
        "edges": edges,
        "count": count,
        "n_workers": len(workers) if n_workers is None else n_workers,
        "k": k,
        "wall_ms": wall_ms,
        "workers": [w.to_dict() for w in workers],
        "distribution": distribution([w.busy_ns for w in workers]),
        "distribution_with_idle": distribution([w.total_ns for w in workers]),
        "phase_percentages": percentages,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
