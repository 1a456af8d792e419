"""Compact arrays: nested set views over one permutation of vertex IDs.

A compact array holds every ID of its universe exactly once.  The active set
at the current level is the prefix ``values[:top]``; entering a level pushes a
copy of the boundary so that removals (shrinking arrays) or additions
(growing arrays) only move the new boundary.  ``positions`` is the inverse
permutation, which makes membership an O(1) index comparison.
"""
from __future__ import annotations

import enum
from typing import Iterable


class Direction(enum.Enum):
    SHRINKING = "shrinking"
    GROWING = "growing"


class CompactArray:
    __slots__ = ("values", "positions", "level_ptrs", "direction")

    def __init__(self, universe_size: int, direction: Direction = Direction.SHRINKING):
        if universe_size < 0:
            raise ValueError("universe_size must be >= 0")
        self.values = list(range(universe_size))
        self.positions = list(range(universe_size))
        self.direction = direction
        root = universe_size if direction is Direction.SHRINKING else 0
        self.level_ptrs = [root]

    @property
    def capacity(self) -> int:
        return len(self.values)

    @property
    def top(self) -> int:
        return self.level_ptrs[-1]

    @property
    def depth(self) -> int:
        return len(self.level_ptrs) - 1

    def __len__(self) -> int:
        return self.level_ptrs[-1]

    def active(self) -> list[int]:
        return self.values[:self.level_ptrs[-1]]

    def contains(self, v: int) -> bool:
        return self.positions[v] < self.level_ptrs[-1]

    __contains__ = contains

    def _swap(self, i: int, j: int) -> None:
        values, positions = self.values, self.positions
        a, b = values[i], values[j]
        values[i], values[j] = b, a
        positions[a], positions[b] = j, i

    def remove_active(self, v: int) -> None:
        """Swap ``v`` behind the boundary and shrink the current level by one."""
        if self.direction is not Direction.SHRINKING:
            raise RuntimeError("remove_active on a growing array")
        top = self.level_ptrs[-1]
        i = self.positions[v]
        if i >= top:
            raise KeyError(f"{v} is not active")
        self._swap(i, top - 1)
        self.level_ptrs[-1] = top - 1

    def add_active(self, v: int) -> None:
        """Swap ``v`` onto the boundary slot and grow the current level by one."""
        if self.direction is not Direction.GROWING:
            raise RuntimeError("add_active on a shrinking array")
        top = self.level_ptrs[-1]
        i = self.positions[v]
        if i < top:
            raise KeyError(f"{v} is already active")
        self._swap(i, top)
        self.level_ptrs[-1] = top + 1

    def compact_to(self, members: Iterable[int]) -> None:
        """Shrink the current level to exactly ``members`` (a subset of it).

        Costs O(len(members)): members are swapped to the front of the active
        range instead of scanning for the ones that leave.
        """
        if self.direction is not Direction.SHRINKING:
            raise RuntimeError("compact_to on a growing array")
        values, positions = self.values, self.positions
        top = self.level_ptrs[-1]
        k = 0
        for v in members:
            i = positions[v]
            if i >= top or i < k:
                raise KeyError(f"{v} is not an active, distinct member")
            a = values[k]
            values[k], values[i] = v, a
            positions[v], positions[a] = k, i
            k += 1
        self.level_ptrs[-1] = k

    def enter_level(self) -> None:
        self.level_ptrs.append(self.level_ptrs[-1])

    def exit_level(self) -> None:
        if len(self.level_ptrs) < 2:
            raise RuntimeError("cannot exit the root level")
        self.level_ptrs.pop()

    def reset(self) -> None:
        """Back to the freshly created active set; the permutation is kept."""
        root = len(self.values) if self.direction is Direction.SHRINKING else 0
        self.level_ptrs = [root]

    def check(self) -> None:
        """Assert the permutation/lookup and boundary-monotonicity invariants."""
        values, positions = self.values, self.positions
        n = len(values)
        assert sorted(values) == list(range(n)), "values is not a permutation"
        for i, v in enumerate(values):
            assert positions[v] == i, f"positions[{v}] != {i}"
        ptrs = self.level_ptrs
        assert all(0 <= p <= n for p in ptrs)
        if self.direction is Direction.SHRINKING:
            assert all(a >= b for a, b in zip(ptrs, ptrs[1:])), "shrinking pointers increased"
        else:
            assert all(a <= b for a, b in zip(ptrs, ptrs[1:])), "growing pointers decreased"

    def __repr__(self) -> str:
        return (f"CompactArray({self.direction.value}, active={self.active()}, "
                f"ptrs={self.level_ptrs})")
