from __future__ import annotations

import heapq
import json

import pytest

from bicliques import stats as st
from bicliques.engine import init_root_state
from bicliques.graph import random_bipartite
from bicliques.scheduler import run_parallel


def test_record_is_additive():
    b = st.PhaseBreakdown()
    st.record_phase(b, st.CANDIDATE_SELECTION, 5)
    st.record_phase(b, st.CANDIDATE_SELECTION, 5)
    assert b.phases[st.CANDIDATE_SELECTION] == 10


def test_fresh_breakdown_is_zero():
    b = st.PhaseBreakdown()
    assert set(b.phases) == set(st.PHASES)
    assert all(v == 0 for v in b.phases.values())
    assert b.subtrees_executed == b.bicliques_emitted == b.tasks_stolen == 0


def test_negative_duration_rejected():
    with pytest.raises(ValueError):
        st.PhaseBreakdown().record_phase(st.IDLE, -1)


def test_busy_excludes_idle():
    b = st.PhaseBreakdown()
    b.record_phase(st.IDLE, 7)
    b.record_phase(st.OTHER, 3)
    assert b.busy_ns == 3 and b.total_ns == 10


def test_single_worker_ratio_is_one():
    b = st.PhaseBreakdown()
    b.record_phase(st.L_CONSTRUCTION, 123)
    assert st.imbalance([b]) == 1.0


def test_identical_workers_zero_spread():
    ws = []
    for t in range(4):
        b = st.PhaseBreakdown(worker_id=t)
        b.record_phase(st.MAXIMAL_EXPANSION, 50)
        ws.append(b)
    d = st.distribution([w.busy_ns for w in ws])
    assert d["stddev"] == 0.0 and d["min"] == d["max"] == 1.0


def test_distribution_values():
    d = st.distribution([1, 2, 3, 6])
    assert d["max"] == pytest.approx(2.0)
    assert d["min"] == pytest.approx(1 / 3)
    assert d["median"] == pytest.approx(2.5 / 3)
    assert st.distribution([]) == dict.fromkeys(d, 0.0)
    assert st.distribution([0, 0])["max"] == 1.0


def test_report_fields_and_determinism():
    r = run_parallel(random_bipartite(12, 14, 0.5, seed=2), 3, 2)
    doc = st.report(r.workers, dataset="toy", n_u=12, n_v=14, edges=80, count=r.count,
                    n_workers=3, k=2, wall_ms=1.5)
    for key in ("dataset", "n_u", "n_v", "edges", "count", "n_workers", "k", "wall_ms",
                "workers", "distribution"):
        assert key in doc
    for w in doc["workers"]:
        assert {"id", "phases", "subtrees", "emitted", "stolen"} <= set(w)
    assert {"min", "q1", "median", "q3", "max", "stddev"} <= set(doc["distribution"])
    assert sum(doc["phase_percentages"].values()) == pytest.approx(100.0)
    again = st.report(r.workers, dataset="toy", n_u=12, n_v=14, edges=80, count=r.count,
                      n_workers=3, k=2, wall_ms=1.5)
    assert st.dumps(doc) == st.dumps(again)
    assert json.loads(st.dumps(doc))["count"] == r.count


def test_instrumentation_does_not_change_output():
    g = random_bipartite(11, 12, 0.5, seed=4)
    plain, timed = [], []
    init_root_state(g).run_subtree(lambda l, r: plain.append((tuple(l), tuple(r))))
    b = st.PhaseBreakdown()
    init_root_state(g).run_subtree(lambda l, r: timed.append((tuple(l), tuple(r))), b)
    assert plain == timed
    assert b.bicliques_emitted == len(plain)
    assert sum(b.phases[p] for p in st.SEARCH_PHASES) > 0


def _simulate(costs: list[int], n_workers: int, split: dict[int, list[int]]) -> list[st.PhaseBreakdown]:
    """Greedy list scheduling of root tasks.

    Tasks listed in ``split`` are published as their child subtrees once the
    root pool is empty, the way one stealing round hands them out.
    """
    workers = [st.PhaseBreakdown(worker_id=t) for t in range(n_workers)]
    free = [(0, t) for t in range(n_workers)]
    pending = list(enumerate(costs))
    children: list[int] = []
    heapq.heapify(free)
    while pending or children:
        now, t = heapq.heappop(free)
        if pending:
            i, cost = pending.pop(0)
            if i in split:
                # the worker keeps the first child and publishes the rest
                first, *rest = split[i]
                children.extend(rest)
                cost = first
        else:
            cost = children.pop(0)
        workers[t].record_phase(st.MAXIMAL_EXPANSION, cost)
        heapq.heappush(free, (now + cost, t))
    end = max(now for now, _ in free)
    for now, t in free:
        workers[t].record_phase(st.IDLE, end - now)
    return workers


def test_scripted_stealing_lowers_max_over_mean():
    costs = [60] + [5] * 12
    no_steal = _simulate(costs, 4, {})
    steal = _simulate(costs, 4, {0: [6] * 10})
    a = st.report(no_steal, k=1)["distribution"]["max_over_mean"]
    b = st.report(steal, k=2)["distribution"]["max_over_mean"]
    assert sum(w.busy_ns for w in no_steal) == sum(w.busy_ns for w in steal)
    assert b < a
