"""Recursion-free maximal biclique search over one subtree.

The search keeps four nested set views per worker:

* ``P`` candidates (shrinking compact array over the candidate side U),
* ``L`` common neighbourhood of ``R`` (shrinking compact array over V),
* ``R`` current right side (growing compact array over U),
* ``Q`` retired candidates, a stack of per-level windows over U.

Descending one level pushes a boundary on each view; ascending pops it.  No
set is ever copied per level, so the per-worker footprint stays proportional
to ``n_u + n_v`` however deep the search goes.

Work handed between workers is described by a :class:`Frame`: the ``L``,
``R`` and ``Q`` of one search node plus its ordered candidate list.  Branch
``i`` of a frame pops ``candidates[i]`` with ``candidates[:i]`` already
retired, exactly as a serial run popping in that order would.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import stats as st
from .compact import CompactArray, Direction
from .graph import BipartiteGraph

NOT_IN_FRAME = 1 << 62

Emit = Callable[[Sequence[int], Sequence[int]], None]
StealHook = Callable[[int], bool]


class InvariantViolation(AssertionError):
    """A debug-mode check on the search state failed."""


def _nothing() -> int:
    return 0


class NeighborCountBuffer:
    """Tallies ``|N(v) ∩ L'|`` for candidate-side vertices touched by a scan."""

    __slots__ = ("counts", "touched")

    def __init__(self, n: int):
        self.counts = [0] * n
        self.touched: list[int] = []

    def reset(self) -> None:
        counts = self.counts
        for v in self.touched:
            counts[v] = 0
        self.touched.clear()


class ExclusionWindows:
    """The retired set ``Q`` as a stack of per-level windows in one buffer.

    Window ``d`` starts with the members inherited from the parent window
    (those still adjacent to the new ``L``) and grows as candidates of level
    ``d`` are retired.  ``depth_of[v]`` is the deepest window holding ``v``;
    since a vertex stays in ``Q`` on a contiguous run of levels, membership
    at the current level is ``depth_of[v] == level``.
    """

    __slots__ = ("buf", "starts", "inherited", "depth_of", "peak")

    def __init__(self, n: int):
        self.buf: list[int] = []
        self.starts = [0]
        self.inherited = [0]
        self.depth_of = [-1] * n
        self.peak = 0

    @property
    def level(self) -> int:
        return len(self.starts) - 1

    def __len__(self) -> int:
        return len(self.buf) - self.starts[-1]

    def contains(self, v: int) -> bool:
        return self.depth_of[v] == len(self.starts) - 1

    __contains__ = contains

    def members(self) -> list[int]:
        return self.buf[self.starts[-1]:]

    def reset(self, members: Sequence[int] = ()) -> None:
        depth_of = self.depth_of
        for v in self.buf:
            depth_of[v] = -1
        self.buf.clear()
        self.starts = [0]
        self.inherited = [len(members)]
        for v in members:
            depth_of[v] = 0
        self.buf.extend(members)
        self.peak = max(self.peak, len(self.buf))

    def retire(self, v: int) -> None:
        self.buf.append(v)
        self.depth_of[v] = len(self.starts) - 1
        if len(self.buf) > self.peak:
            self.peak = len(self.buf)

    def enter_level(self, kept: Sequence[int]) -> None:
        buf, depth_of = self.buf, self.depth_of
        child = len(self.starts)
        self.starts.append(len(buf))
        self.inherited.append(len(kept))
        for v in kept:
            depth_of[v] = child
        buf.extend(kept)
        if len(buf) > self.peak:
            self.peak = len(buf)

    def exit_level(self) -> None:
        if len(self.starts) < 2:
            raise RuntimeError("cannot exit the root window")
        start = self.starts.pop()
        n_inherited = self.inherited.pop()
        parent = len(self.starts) - 1
        buf, depth_of = self.buf, self.depth_of
        split = start + n_inherited
        for j in range(start, split):
            depth_of[buf[j]] = parent
        for j in range(split, len(buf)):
            depth_of[buf[j]] = -1
        del buf[start:]


@dataclass(frozen=True)
class Frame:
    """An immutable search node whose candidates can be popped by any worker.

    ``rank[v]`` is the position of ``v`` in ``candidates``, ``-1`` for members
    of the node's ``Q``, and :data:`NOT_IN_FRAME` otherwise; so for branch
    ``i``, ``rank[v] < i`` means "retired" and ``i < rank[v] < NOT_IN_FRAME``
    means "still a candidate".  ``lmask`` is ``None`` when ``L`` is all of V.
    """

    depth: int
    candidates: tuple[int, ...]
    rank: list[int]
    lmask: Optional[bytearray]
    r: tuple[int, ...]

    @classmethod
    def root(cls, g: BipartiteGraph) -> "Frame":
        """Depth-0 frame: every non-isolated U vertex by ascending degree (ties by ID)."""
        deg = g.adj_u.degrees().tolist()
        order = sorted((v for v in range(g.n_u) if deg[v] > 0), key=lambda v: (deg[v], v))
        rank = [NOT_IN_FRAME] * g.n_u
        for i, v in enumerate(order):
            rank[v] = i
        return cls(0, tuple(order), rank, None, ())

    @classmethod
    def from_sets(cls, depth: int, n_u: int, n_v: int, l: Sequence[int], r: Sequence[int],
                  candidates: Sequence[int], q: Sequence[int]) -> "Frame":
        rank = [NOT_IN_FRAME] * n_u
        for v in q:
            rank[v] = -1
        for i, v in enumerate(candidates):
            rank[v] = i
        lmask = bytearray(n_v)
        for u in l:
            lmask[u] = 1
        return cls(depth, tuple(candidates), rank, lmask, tuple(r))

    def __len__(self) -> int:
        return len(self.candidates)

    def l_members(self, n_v: int) -> list[int]:
        if self.lmask is None:
            return list(range(n_v))
        return [u for u in range(n_v) if self.lmask[u]]

    def q_members(self) -> list[int]:
        return [v for v, r in enumerate(self.rank) if r == -1]


class SearchState:
    """Per-worker search state replacing the call stack of the recursive search.

    The arrays are allocated once and reused for every subtree the worker
    runs.  ``level`` counts levels above the subtree's base node, whose
    absolute depth in the search forest is ``base_depth``.
    """

    def __init__(self, g: BipartiteGraph, debug: bool = False):
        self.g = g
        self.adj_u = g.adj_u.lists
        self.adj_v = g.adj_v.lists
        self.P = CompactArray(g.n_u, Direction.SHRINKING)
        self.L = CompactArray(g.n_v, Direction.SHRINKING)
        self.R = CompactArray(g.n_u, Direction.GROWING)
        self.Q = ExclusionWindows(g.n_u)
        self.buf = NeighborCountBuffer(g.n_u)
        self.level = 0
        self.base_depth = 0
        self.last_min = [0]
        self.chosen: list[int] = []
        self.l_prime: list[int] = []
        self.debug = debug
        self.checks = 0
        self.peak_touched = 0
        self.peak_level = 0
        self.peak_depth = 0
        self._saved: list[tuple] = []

    # -- setup -----------------------------------------------------------

    def reset(self) -> None:
        self.P.reset()
        self.L.reset()
        self.R.reset()
        self.Q.reset()
        self.buf.reset()
        self.level = 0
        self.base_depth = 0
        self.last_min = [0]
        self.chosen.clear()
        self._saved.clear()

    def load(self, base_depth: int, l: Sequence[int], r: Sequence[int], p: Sequence[int],
             q: Sequence[int]) -> None:
        """Make ``(L, R, P, Q)`` the base node of the next subtree."""
        self.reset()
        self.base_depth = base_depth
        self.L.compact_to(l)
        for v in r:
            self.R.add_active(v)
        self.P.compact_to(p)
        self.Q.reset(q)

    # -- the four steps of one search node -------------------------------

    def select_candidate(self) -> Optional[int]:
        """Vertex of ``P`` with the fewest neighbours in ``L`` (ties: smallest ID).

        Counting a vertex stops as soon as it exceeds the best count so far,
        and the scan stops at the first vertex matching the count selected
        last at this level, which no remaining vertex can undercut.
        """
        p_vals = self.P.values
        p_top = self.P.level_ptrs[-1]
        if p_top == 0:
            return None
        lpos = self.L.positions
        l_top = self.L.level_ptrs[-1]
        adj_u = self.adj_u
        last = self.last_min[-1]
        best = -1
        cur_min = NOT_IN_FRAME
        for idx in range(p_top):
            v = p_vals[idx]
            cnt = 0
            for u in adj_u[v]:
                if lpos[u] < l_top:
                    cnt += 1
                    if cnt > cur_min:
                        break
            else:
                if cnt < cur_min or v < best:
                    cur_min = cnt
                    best = v
                    if cnt == last:
                        break
        if self.debug:
            self.checks += 1
            if cur_min < last:
                raise InvariantViolation(f"selected count {cur_min} below previous {last}")
        self.last_min[-1] = cur_min
        return best

    def construct_l_prime(self, x: int) -> int:
        """``L' = N(x) ∩ L`` into ``self.l_prime``; returns ``|L'|``."""
        lpos = self.L.positions
        l_top = self.L.level_ptrs[-1]
        self.l_prime = lp = [u for u in self.adj_u[x] if lpos[u] < l_top]
        return len(lp)

    def reverse_scan(self) -> None:
        """Count ``|N(v) ∩ L'|`` for every ``v`` in ``P ∪ Q`` by walking ``L'``'s adjacency."""
        ppos = self.P.positions
        p_top = self.P.level_ptrs[-1]
        depth_of = self.Q.depth_of
        level = self.level
        counts = self.buf.counts
        touched = self.buf.touched
        adj_v = self.adj_v
        for u in self.l_prime:
            for v in adj_v[u]:
                if ppos[v] < p_top or depth_of[v] == level:
                    c = counts[v]
                    if c == 0:
                        touched.append(v)
                    counts[v] = c + 1
        if len(touched) > self.peak_touched:
            self.peak_touched = len(touched)
        if self.debug:
            self._check_counts()

    def check_maximality(self) -> bool:
        """False if some retired vertex is adjacent to all of ``L'``."""
        n = len(self.l_prime)
        counts = self.buf.counts
        depth_of = self.Q.depth_of
        level = self.level
        for v in self.buf.touched:
            if counts[v] == n and depth_of[v] == level:
                return False
        return True

    def expand_maximal(self) -> tuple[list[int], list[int], list[int]]:
        """Split touched vertices into (joins ``R'``, stays in ``P'``, stays in ``Q'``)."""
        n = len(self.l_prime)
        counts = self.buf.counts
        depth_of = self.Q.depth_of
        level = self.level
        expanded: list[int] = []
        p_next: list[int] = []
        q_next: list[int] = []
        for v in self.buf.touched:
            if depth_of[v] == level:
                q_next.append(v)
            elif counts[v] == n:
                expanded.append(v)
            else:
                p_next.append(v)
        return expanded, p_next, q_next

    # -- level moves -----------------------------------------------------

    def descend(self, x: int, expanded: Sequence[int], p_next: Sequence[int],
                q_next: Sequence[int]) -> None:
        if self.debug:
            self._saved.append(self._sets())
        self.chosen.append(x)
        self.L.enter_level()
        self.L.compact_to(self.l_prime)
        R = self.R
        R.enter_level()
        R.add_active(x)
        for v in expanded:
            R.add_active(v)
        self.P.enter_level()
        self.P.compact_to(p_next)
        self.Q.enter_level(q_next)
        self.last_min.append(0)
        self.level += 1
        if self.level > self.peak_level:
            self.peak_level = self.level
        if self.base_depth + self.level > self.peak_depth:
            self.peak_depth = self.base_depth + self.level

    def ascend(self) -> None:
        self.L.exit_level()
        self.R.exit_level()
        self.P.exit_level()
        self.Q.exit_level()
        self.last_min.pop()
        self.level -= 1
        if self.debug:
            if self._sets() != self._saved.pop():
                raise InvariantViolation("parent sets not restored on ascent")
            self.checks += 1
        self.Q.retire(self.chosen.pop())

    # -- drivers ---------------------------------------------------------

    def run_subtree(self, emit: Optional[Emit] = None,
                    stats: Optional[st.PhaseBreakdown] = None,
                    steal_hook: Optional[StealHook] = None) -> bool:
        """Enumerate every maximal biclique below the loaded base node.

        ``steal_hook(cur_level)`` runs before each candidate pop; returning
        True means the current node's remaining candidates were published
        for other workers, so the node is closed here and the search carries
        on with its ancestors.  Returns False if that happened at least once.
        """
        clock = time.thread_time_ns if stats is not None else _nothing
        phases = stats.phases if stats is not None else dict.fromkeys(st.PHASES, 0)
        P, Q, R, buf = self.P, self.Q, self.R, self.buf
        emitted = 0
        completed = True
        while True:
            if P.level_ptrs[-1] == 0:
                if self.level == 0:
                    break
                self.ascend()
                continue
            if steal_hook is not None and steal_hook(self.base_depth + self.level + 1):
                completed = False
                P.level_ptrs[-1] = 0
                continue
            t0 = clock()
            x = self.select_candidate()
            P.remove_active(x)
            t1 = clock()
            n = self.construct_l_prime(x)
            t2 = clock()
            phases[st.CANDIDATE_SELECTION] += t1 - t0
            phases[st.L_CONSTRUCTION] += t2 - t1
            if n == 0:
                Q.retire(x)
                continue
            self.reverse_scan()
            maximal = self.check_maximality()
            t3 = clock()
            phases[st.MAXIMALITY_CHECKING] += t3 - t2
            descended = False
            if maximal:
                expanded, p_next, q_next = self.expand_maximal()
                emitted += 1
                if emit is not None or self.debug:
                    r_side = R.active() + [x] + expanded
                    if self.debug:
                        self._check_closed(self.l_prime, r_side)
                    if emit is not None:
                        emit(self.l_prime, r_side)
                if p_next:
                    self.descend(x, expanded, p_next, q_next)
                    descended = True
            buf.reset()
            if not descended:
                Q.retire(x)
            phases[st.MAXIMAL_EXPANSION] += clock() - t3
        if stats is not None:
            stats.bicliques_emitted += emitted
        return completed

    def start_branch(self, frame: Frame, i: int, emit: Optional[Emit] = None,
                     stats: Optional[st.PhaseBreakdown] = None) -> bool:
        """Run the search node that pops ``frame.candidates[i]``.

        Emits the node's biclique when maximal and, when its candidate set is
        non-empty, loads it as the base of the next :meth:`run_subtree`.
        Returns whether there is a subtree to run.
        """
        clock = time.thread_time_ns if stats is not None else _nothing
        phases = stats.phases if stats is not None else dict.fromkeys(st.PHASES, 0)
        t0 = clock()
        x = frame.candidates[i]
        rank = frame.rank
        lmask = frame.lmask
        if lmask is None:
            lp = list(self.adj_u[x])
        else:
            lp = [u for u in self.adj_u[x] if lmask[u]]
        t1 = clock()
        phases[st.L_CONSTRUCTION] += t1 - t0
        if not lp:
            return False
        counts = self.buf.counts
        touched = self.buf.touched
        for u in lp:
            for v in self.adj_v[u]:
                r = rank[v]
                if r != i and r != NOT_IN_FRAME:
                    c = counts[v]
                    if c == 0:
                        touched.append(v)
                    counts[v] = c + 1
        if len(touched) > self.peak_touched:
            self.peak_touched = len(touched)
        n = len(lp)
        if self.debug:
            pq = [v for v in range(len(rank)) if rank[v] != NOT_IN_FRAME and rank[v] != i]
            self._check_counts(lp, pq)
        maximal = not any(counts[v] == n and rank[v] < i for v in touched)
        t2 = clock()
        phases[st.MAXIMALITY_CHECKING] += t2 - t1
        if not maximal:
            self.buf.reset()
            return False
        expanded: list[int] = []
        p_next: list[int] = []
        q_next: list[int] = []
        for v in touched:
            if rank[v] < i:
                q_next.append(v)
            elif counts[v] == n:
                expanded.append(v)
            else:
                p_next.append(v)
        self.buf.reset()
        if stats is not None:
            stats.bicliques_emitted += 1
        if emit is not None or self.debug:
            r_side = list(frame.r) + [x] + expanded
            if self.debug:
                self._check_closed(lp, r_side)
            if emit is not None:
                emit(lp, r_side)
        t3 = clock()
        phases[st.MAXIMAL_EXPANSION] += t3 - t2
        if not p_next:
            return False
        self.load(frame.depth + 1, lp, list(frame.r) + [x] + expanded, p_next, q_next)
        phases[st.SUBTREE_FETCHING] += clock() - t3
        return True

    def snapshot(self) -> Frame:
        """Freeze the current node; candidates ordered by ``|N(v) ∩ L|`` then ID."""
        lpos = self.L.positions
        l_top = self.L.level_ptrs[-1]
        adj_u = self.adj_u

        def key(v: int) -> tuple[int, int]:
            return (sum(1 for u in adj_u[v] if lpos[u] < l_top), v)

        candidates = sorted(self.P.active(), key=key)
        return Frame.from_sets(self.base_depth + self.level, self.g.n_u, self.g.n_v,
                               self.L.active(), self.R.active(), candidates, self.Q.members())

    def element_slots(self) -> int:
        """Peak set-element slots held by this worker.

        Counts the three compact arrays (values and positions), the Q buffer
        and lookup, the count buffer, and the per-level stacks: seven entries
        per level (three array pointers, two Q window fields, last_min, the
        chosen vertex).
        """
        return (2 * self.P.capacity + 2 * self.L.capacity + 2 * self.R.capacity
                + len(self.Q.depth_of) + self.Q.peak + len(self.buf.counts)
                + self.peak_touched + 7 * (self.peak_level + 1))

    # -- debug checks ----------------------------------------------------

    def _sets(self) -> tuple[frozenset, ...]:
        return (frozenset(self.P.active()), frozenset(self.L.active()),
                frozenset(self.R.active()), frozenset(self.Q.members()))

    def _check_counts(self, lp: Optional[Sequence[int]] = None,
                      pq: Optional[Sequence[int]] = None) -> None:
        if lp is None:
            lp = self.l_prime
            pq = self.P.active() + self.Q.members()
        lset = set(lp)
        counts = self.buf.counts
        for v in pq:
            expected = sum(1 for u in self.adj_u[v] if u in lset)
            if counts[v] != expected:
                raise InvariantViolation(
                    f"reverse scan count for {v} is {counts[v]}, forward count {expected}")
        self.checks += 1

    def _check_closed(self, l_side: Sequence[int], r_side: Sequence[int]) -> None:
        if not l_side or not r_side:
            raise InvariantViolation("emitted a biclique with an empty side")
        if len(set(r_side)) != len(r_side):
            raise InvariantViolation("duplicate vertex in R'")
        common_v = set(self.adj_u[r_side[0]])
        for v in r_side[1:]:
            common_v.intersection_update(self.adj_u[v])
        common_u = set(self.adj_v[l_side[0]])
        for u in l_side[1:]:
            common_u.intersection_update(self.adj_v[u])
        if common_v != set(l_side) or common_u != set(r_side):
            raise InvariantViolation(f"emitted pair is not closed: L={sorted(l_side)} R={sorted(r_side)}")
        self.checks += 1


def init_root_state(g: BipartiteGraph, debug: bool = False) -> SearchState:
    """State whose base node is the whole graph: ``P`` = non-isolated U, ``L`` = V."""
    s = SearchState(g, debug=debug)
    deg = g.adj_u.degrees().tolist()
    s.load(0, range(g.n_v), (), [v for v in range(g.n_u) if deg[v] > 0], ())
    return s


def enumerate_serial(g: BipartiteGraph, debug: bool = False) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Single-worker run from the root state; returns sorted ``(L, R)`` pairs."""
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def emit(l_side, r_side):
        out.append((tuple(sorted(l_side)), tuple(sorted(r_side))))

    init_root_state(g, debug=debug).run_subtree(emit)
    out.sort()
    return out
