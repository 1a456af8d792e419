"""Worker pool: atomic claiming of first-level subtrees plus k-level work stealing.

Every unit of work is one branch ``(frame, i)`` of a shared :class:`Frame`.
At first the only frame is the root; workers claim its candidates through
an atomic cursor.  When a worker finds every pool empty it becomes a thief:
it raises the global stealing level ``glevel`` (at most ``k``) and waits at a
rendezvous.  Busy workers notice the raised level at the next candidate pop
of a node at depth ``glevel - 1``, publish that node as a frame in their own
slot, and join the rendezvous; they then close that node and resume their
ancestors, picking the published branches up again from their slot later.  Once every worker has arrived (finished
workers count as permanently arrived) the published frames become visible
and everyone claims branches: root pool first, then its own slot, then the
other slots in circular order starting at ``tid + 1``.

Stealing levels run from 2 to ``k``; with ``k == 1`` no stealing happens.
"""
from __future__ import annotations

import enum
import os
import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import stats as st
from .engine import Frame, SearchState
from .graph import BipartiteGraph

FrameSnapshot = Frame


class ConfigError(ValueError):
    pass


class SchedulerAborted(RuntimeError):
    """Another worker failed; the run is being torn down."""


class Directive(enum.Enum):
    CONTINUE = "continue"
    FETCH = "fetch_from_pool"
    FINISHED = "finished"


class _Pool:
    """Candidates of one frame behind an atomic claim cursor."""

    __slots__ = ("frame", "owner", "epoch", "_left", "_lock")

    def __init__(self, frame: Frame, owner: Optional[int], epoch: int):
        self.frame = frame
        self.owner = owner
        self.epoch = epoch
        self._left = len(frame)
        self._lock = threading.Lock()

    def claim(self) -> Optional[int]:
        with self._lock:
            r = self._left
            if r < 1:
                return None
            self._left = r - 1
        return len(self.frame) - r

    def __len__(self) -> int:
        return self._left


class GlobalTaskPool:
    def __init__(self, root: Frame, n_workers: int, k: int):
        if n_workers < 1:
            raise ConfigError("n_workers must be >= 1")
        if k < 1:
            raise ConfigError("k must be >= 1")
        self.n_workers = n_workers
        self.k = k
        self.root_pool = _Pool(root, None, -1)
        self.published: list[Optional[_Pool]] = [None] * n_workers
        self.glevel = 1
        self.pending = False  # a thief raised glevel and the rendezvous is open
        self.epoch = 0
        self.pause_flags = [False] * n_workers
        self.arrived: set[int] = set()
        self.parked: set[int] = set()
        self.aborted = False
        self.rounds = 0
        self._cv = threading.Condition()

    # -- claiming --------------------------------------------------------

    def claim_root_task(self) -> Optional[int]:
        """Index into the root frame's candidates, each handed out once."""
        return self.root_pool.claim()

    def _visible(self, pool: Optional[_Pool]) -> bool:
        return pool is not None and pool.epoch < self.epoch

    def fetch(self, tid: int) -> Optional[tuple[Frame, int, Optional[int]]]:
        """Claim the next branch: root pool, own slot, then slots ``tid+1, tid+2, ...``.

        Returns ``(frame, index, owner)`` where ``owner`` is the publishing
        worker (``None`` for the root frame), or None when nothing is left.
        """
        if self.aborted:
            return None
        i = self.root_pool.claim()
        if i is not None:
            return self.root_pool.frame, i, None
        n = self.n_workers
        for step in range(n):
            pool = self.published[(tid + step) % n]
            if self._visible(pool):
                i = pool.claim()
                if i is not None:
                    return pool.frame, i, pool.owner
        return None

    def has_work(self) -> bool:
        if len(self.root_pool):
            return True
        return any(self._visible(p) and len(p) for p in self.published)

    # -- rendezvous ------------------------------------------------------

    def _arrive(self, tid: int, stats: Optional[st.PhaseBreakdown]) -> None:
        # caller holds self._cv
        t0 = time.perf_counter_ns()
        epoch = self.epoch
        self.arrived.add(tid)
        self._maybe_complete()
        while self.epoch == epoch and not self.aborted:
            self._cv.wait()
        self.pause_flags[tid] = False
        if stats is not None:
            stats.record_phase(st.IDLE, time.perf_counter_ns() - t0)
        if self.aborted:
            raise SchedulerAborted()

    def _maybe_complete(self) -> None:
        if self.pending and len(self.arrived | self.parked) == self.n_workers:
            self.pending = False
            self.arrived.clear()
            self.epoch += 1
            self.rounds += 1
            self._cv.notify_all()

    def work_stealing_round(self, tid: int, cur_level: int, publish: Callable[[], Frame],
                            stats: Optional[st.PhaseBreakdown] = None) -> Directive:
        """Steal hook run before each candidate pop of a busy worker.

        ``CONTINUE`` unless a rendezvous is open at this worker's level; then
        the node is published via ``publish()`` and, after the rendezvous,
        ``FETCH`` tells the caller that the node's remaining candidates now
        live in its slot and must not be expanded locally.
        """
        if cur_level != self.glevel or not self.pending:
            return Directive.CONTINUE
        with self._cv:
            if cur_level != self.glevel or not self.pending or self.aborted:
                return Directive.CONTINUE
            t0 = time.thread_time_ns()
            self.published[tid] = _Pool(publish(), tid, self.epoch)
            if stats is not None:
                stats.record_phase(st.WORK_STEALING, time.thread_time_ns() - t0)
            self._arrive(tid, stats)
        return Directive.FETCH

    def idle(self, tid: int, stats: Optional[st.PhaseBreakdown] = None) -> Directive:
        """Called by a worker that found nothing to fetch."""
        with self._cv:
            if self.aborted:
                return Directive.FINISHED
            if self.has_work():
                return Directive.FETCH
            if self.pending:
                self.pause_flags[tid] = True
                self._arrive(tid, stats)
                return Directive.FETCH
            if self.glevel < self.k:
                self.pause_flags[tid] = True
                self.glevel += 1
                self.pending = True
                self._arrive(tid, stats)
                return Directive.FETCH
            self.parked.add(tid)
            self._maybe_complete()
            return Directive.FINISHED

    def abort(self) -> None:
        with self._cv:
            self.aborted = True
            self._cv.notify_all()


@dataclass
class RunResult:
    count: int
    workers: list[st.PhaseBreakdown]
    bicliques: Optional[list[tuple[tuple[int, ...], tuple[int, ...]]]] = None
    wall_ns: int = 0
    n_workers: int = 1
    k: int = 2
    rounds: int = 0
    glevel: int = 1
    # per worker: (frame, branch index) for every claim, when log_claims is set
    claims: Optional[list[list[tuple]]] = field(default=None, repr=False)
    debug_checks: int = 0

    def report(self, g: BipartiteGraph, dataset: str = "") -> dict:
        return st.report(self.workers, dataset=dataset, n_u=g.n_u, n_v=g.n_v, edges=g.n_edges,
                         count=self.count, n_workers=self.n_workers, k=self.k,
                         wall_ms=self.wall_ns / 1e6)


def default_workers() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def run_parallel(g: BipartiteGraph, n_workers: int = 1, k: int = 2, mode: str = "count",
                 debug: bool = False, log_claims: bool = False) -> RunResult:
    """Enumerate all maximal bicliques of ``g`` on ``n_workers`` threads.

    ``mode`` is ``"count"`` or ``"enumerate"``; the latter also returns the
    sorted ``(L, R)`` pairs in original vertex labels (L from side V, R from
    side U).  ``debug`` turns on the engine's per-node invariant checks.
    """
    if mode not in ("count", "enumerate"):
        raise ConfigError(f"unknown mode {mode!r}")
    pool = GlobalTaskPool(Frame.root(g), n_workers, k)
    g.adj_u.lists, g.adj_v.lists  # build the shared list views before threads start
    workers = [st.PhaseBreakdown(worker_id=t) for t in range(n_workers)]
    found: list[list] = [[] for _ in range(n_workers)]
    claims: list[list] = [[] for _ in range(n_workers)]
    finish_ns = [0] * n_workers
    errors: list[BaseException] = []
    checks = [0] * n_workers

    def work(tid: int) -> None:
        stats = workers[tid]
        cpu0 = time.thread_time_ns()
        state = SearchState(g, debug=debug)
        emit = None
        if mode == "enumerate":
            sink = found[tid]

            def emit(l_side, r_side):
                sink.append((tuple(sorted(l_side)), tuple(sorted(r_side))))

        def hook(cur_level: int) -> bool:
            d = pool.work_stealing_round(tid, cur_level, state.snapshot, stats)
            return d is Directive.FETCH

        try:
            while True:
                t0 = time.thread_time_ns()
                claim = pool.fetch(tid)
                stats.record_phase(st.SUBTREE_FETCHING, time.thread_time_ns() - t0)
                if claim is None:
                    if pool.idle(tid, stats) is Directive.FINISHED:
                        break
                    continue
                frame, i, owner = claim
                stats.subtrees_executed += 1
                if owner is not None and owner != tid:
                    stats.tasks_stolen += 1
                if log_claims:
                    claims[tid].append((frame, i))
                if state.start_branch(frame, i, emit, stats):
                    state.run_subtree(emit, stats, hook)
        except SchedulerAborted:
            pass
        except BaseException as exc:
            errors.append(exc)
            pool.abort()
        finally:
            finish_ns[tid] = time.perf_counter_ns()
            cpu = time.thread_time_ns() - cpu0
            measured = sum(v for name, v in stats.phases.items() if name != st.IDLE)
            stats.phases[st.OTHER] += max(0, cpu - measured)
            stats.peak_slots = state.element_slots()
            stats.peak_depth = state.peak_depth
            checks[tid] = state.checks

    start = time.perf_counter_ns()
    if n_workers == 1:
        work(0)
    else:
        threads = [threading.Thread(target=work, args=(t,), name=f"mbe-worker-{t}", daemon=True)
                   for t in range(n_workers)]
        for th in threads:
            th.start()
        for th in threads:
            th.join()
    end = time.perf_counter_ns()
    if errors:
        raise errors[0]
    for t, stats in enumerate(workers):
        stats.record_phase(st.IDLE, end - finish_ns[t])
        stats.wall_ns = end - start
    count = sum(w.bicliques_emitted for w in workers)
    bicliques = None
    if mode == "enumerate":
        ul, vl = g.u_labels.tolist(), g.v_labels.tolist()
        bicliques = sorted(
            (tuple(sorted(vl[u] for u in l_side)), tuple(sorted(ul[v] for v in r_side)))
            for part in found for l_side, r_side in part
        )
    return RunResult(count=count, workers=workers, bicliques=bicliques, wall_ns=end - start,
                     n_workers=n_workers, k=k, rounds=pool.rounds, glevel=pool.glevel,
                     claims=claims if log_claims else None, debug_checks=sum(checks))
