from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as hst

from bicliques.compact import CompactArray, Direction


def test_create():
    a = CompactArray(4)
    assert a.values == [0, 1, 2, 3]
    assert set(a.active()) == {0, 1, 2, 3}
    assert CompactArray(4, Direction.GROWING).active() == []
    e = CompactArray(0)
    assert e.active() == [] and len(e) == 0
    with pytest.raises(ValueError):
        CompactArray(-1)


def test_contains_after_remove():
    a = CompactArray(4)
    assert a.contains(2) and 2 in a
    a.remove_active(2)
    assert not a.contains(2)
    assert a.top == 3


def test_remove_swaps_with_tail():
    a = CompactArray(4)
    a.remove_active(1)
    assert a.values == [0, 3, 2, 1]
    assert a.level_ptrs == [3]


def test_two_removals_fill_tail_slots():
    # a 5-element P, two vertices moved out: pointer 5 -> 3, both in the tail
    a = CompactArray(10)
    a.compact_to([2, 4, 6, 8, 9])
    assert a.top == 5
    a.remove_active(4)
    a.remove_active(8)
    assert a.top == 3
    assert set(a.values[3:5]) == {4, 8}
    assert set(a.active()) == {2, 6, 9}


def test_remove_only_element():
    a = CompactArray(3)
    a.compact_to([1])
    a.enter_level()
    a.remove_active(1)
    assert a.active() == [] and a.level_ptrs == [1, 0]


def test_remove_errors():
    a = CompactArray(3)
    a.remove_active(0)
    with pytest.raises(KeyError):
        a.remove_active(0)
    with pytest.raises(RuntimeError):
        CompactArray(3, Direction.GROWING).remove_active(0)


def test_add_active():
    a = CompactArray(5, Direction.GROWING)
    a.add_active(3)
    assert a.active() == [3] and a.top == 1
    a.add_active(0)
    assert set(a.active()) == {3, 0} and a.top == 2
    with pytest.raises(KeyError):
        a.add_active(3)
    with pytest.raises(RuntimeError):
        CompactArray(3).add_active(0)


def test_enter_and_exit_levels():
    a = CompactArray(4)
    a.enter_level()
    assert a.level_ptrs == [4, 4]
    a.remove_active(0)
    a.remove_active(3)
    assert a.level_ptrs == [4, 2]
    a.exit_level()
    assert a.level_ptrs == [4]
    assert set(a.active()) == {0, 1, 2, 3}
    with pytest.raises(RuntimeError):
        a.exit_level()


def test_nested_levels_restore_root():
    a = CompactArray(6)
    for v in (0, 2, 4):
        a.enter_level()
        a.remove_active(v)
    assert set(a.active()) == {1, 3, 5}
    assert a.depth == 3
    for _ in range(3):
        a.exit_level()
    assert set(a.active()) == set(range(6))
    a.check()


def test_growing_levels_restore():
    a = CompactArray(5, Direction.GROWING)
    a.add_active(4)
    a.enter_level()
    a.add_active(1)
    a.add_active(2)
    assert set(a.active()) == {4, 1, 2}
    a.exit_level()
    assert a.active() == [4]
    a.check()


def test_nesting_copies_no_elements():
    a = CompactArray(8)
    for _ in range(50):
        a.enter_level()
    assert len(a.values) == len(a.positions) == 8
    assert len(a.level_ptrs) == 51


def test_compact_to_rejects_foreign_members():
    a = CompactArray(5)
    a.compact_to([0, 1])
    with pytest.raises(KeyError):
        a.compact_to([3])
    with pytest.raises(KeyError):
        a.compact_to([0, 0])
    with pytest.raises(RuntimeError):
        CompactArray(3, Direction.GROWING).compact_to([0])


def test_reset_restores_full_root():
    a = CompactArray(5)
    a.compact_to([1, 2])
    a.enter_level()
    a.remove_active(1)
    a.reset()
    assert a.level_ptrs == [5] and set(a.active()) == set(range(5))
    g = CompactArray(5, Direction.GROWING)
    g.add_active(2)
    g.reset()
    assert g.level_ptrs == [0]


ops = hst.lists(
    hst.tuples(hst.sampled_from(["enter", "exit", "change", "compact"]), hst.integers(0, 10**6)),
    max_size=40,
)


@settings(max_examples=300, deadline=None)
@given(n=hst.integers(0, 10), growing=hst.booleans(), seq=ops)
def test_operation_sequences_match_set_model(n, growing, seq):
    direction = Direction.GROWING if growing else Direction.SHRINKING
    a = CompactArray(n, direction)
    model = [set() if growing else set(range(n))]
    for op, pick in seq:
        if op == "enter":
            a.enter_level()
            model.append(set(model[-1]))
        elif op == "exit":
            if len(model) == 1:
                with pytest.raises(RuntimeError):
                    a.exit_level()
                continue
            a.exit_level()
            model.pop()
        elif op == "compact" and not growing:
            active = sorted(model[-1])
            keep = [v for i, v in enumerate(active) if (pick >> i) & 1]
            a.compact_to(keep)
            model[-1] = set(keep)
        elif growing:
            outside = sorted(set(range(n)) - model[-1])
            if outside:
                v = outside[pick % len(outside)]
                a.add_active(v)
                model[-1].add(v)
        else:
            active = sorted(model[-1])
            if active:
                v = active[pick % len(active)]
                a.remove_active(v)
                model[-1].discard(v)
        for i, v in enumerate(a.values):
            assert a.positions[v] == i
        assert set(a.active()) == model[-1]
        for v in range(n):
            assert a.contains(v) == (v in a.values[:a.top])
    a.check()


@settings(max_examples=200, deadline=None)
@given(n=hst.integers(1, 12), picks=hst.lists(hst.integers(0, 11), min_size=1, max_size=12))
def test_add_then_remove_restores_via_level(n, picks):
    g = CompactArray(n, Direction.GROWING)
    before = set(g.active())
    g.enter_level()
    for p in picks:
        v = p % n
        if not g.contains(v):
            g.add_active(v)
    g.exit_level()
    assert set(g.active()) == before
    g.check()
