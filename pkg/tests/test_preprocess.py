"""Prefix selection, block tables, and the restorable linked lists."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxprune.core import InputError, RectList, order_key
from boxprune.preprocess import (
    SENTINEL,
    PrefixColumn,
    build_blocks,
    build_links,
    preprocess,
    select_prefix,
)


def sorted_prefix(rects, column, budget):
    """Full-sort reference for the selection backends."""
    ranked = sorted(range(rects.n), key=lambda j: order_key(rects, column, j))
    return ranked[: budget + 1]


UPPER_EXAMPLE = RectList([(0, 10), (0, 8), (0, 12), (0, 7), (0, 30)])
LOWER_EXAMPLE = RectList([(5, 0), (5, 0), (0, 0), (0, 0), (9, 0)])


@pytest.mark.parametrize("method", ["python", "numpy"])
def test_select_prefix_examples(method):
    # upper endpoints 10, 8, 12, 7, 30: three smallest are rows 3, 1, 0
    assert select_prefix(UPPER_EXAMPLE, 1, 2, method=method) == [3, 1, 0]
    # lower endpoints 5, 5, 0, 0, 9 descending with index tie-break
    assert select_prefix(LOWER_EXAMPLE, 0, 2, method=method) == [4, 0, 1]
    assert select_prefix(UPPER_EXAMPLE, 1, 2, method=method) == sorted_prefix(
        UPPER_EXAMPLE, 1, 2
    )


@pytest.mark.parametrize("method", ["python", "numpy"])
def test_select_prefix_full_budget(method):
    # budget N-1 keeps everything: the full column sort
    for c in (0, 1):
        assert select_prefix(UPPER_EXAMPLE, c, 4, method=method) == sorted_prefix(
            UPPER_EXAMPLE, c, 4
        )


def test_select_prefix_budget_errors():
    with pytest.raises(InputError):
        select_prefix(UPPER_EXAMPLE, 0, 0)
    with pytest.raises(InputError):
        select_prefix(UPPER_EXAMPLE, 0, 5)
    with pytest.raises(InputError):
        select_prefix(UPPER_EXAMPLE, 0, 2, method="bogus")


def test_select_prefix_exact_scalars():
    rects = RectList([(Fraction(1, 3), 1), (Fraction(2, 7), 1), (Fraction(1, 2), 1)])
    assert select_prefix(rects, 0, 1, method="python") == [2, 0]
    with pytest.raises(InputError):
        select_prefix(rects, 0, 1, method="numpy")


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_select_prefix_matches_full_sort(data):
    n = data.draw(st.integers(min_value=2, max_value=24))
    d = data.draw(st.integers(min_value=1, max_value=3))
    # a narrow value range forces plenty of duplicate coordinates
    rows = [
        tuple(data.draw(st.integers(min_value=0, max_value=6)) for _ in range(2 * d))
        for _ in range(n)
    ]
    rects = RectList(rows)
    budget = data.draw(st.integers(min_value=1, max_value=n - 1))
    column = data.draw(st.integers(min_value=0, max_value=2 * d - 1))
    expected = sorted_prefix(rects, column, budget)
    rng = random.Random(data.draw(st.integers(min_value=0, max_value=2**16)))
    assert select_prefix(rects, column, budget, method="python", rng=rng) == expected
    assert select_prefix(rects, column, budget, method="numpy") == expected


def test_build_blocks_examples():
    rects = RectList([(0, 5), (0, 5), (0, 3)])
    block_of, sizes = build_blocks(rects, 1, [2, 0, 1])  # values 3, 5, 5
    assert block_of == {2: 0, 0: 1, 1: 1}
    assert sizes == [1, 2]

    distinct = RectList([(0, 1), (0, 2), (0, 3)])
    block_of, sizes = build_blocks(distinct, 1, [0, 1, 2])
    assert block_of == {0: 0, 1: 1, 2: 2}
    assert sizes == [1, 1, 1]

    equal = RectList([(0, 7)] * 4)
    block_of, sizes = build_blocks(equal, 1, [0, 1, 2, 3])
    assert sizes == [4]
    assert set(block_of.values()) == {0}


def test_build_links_threading():
    prev, nxt = build_links([3, 1, 0])
    assert nxt[SENTINEL] == 3
    assert nxt[3] == 1 and nxt[1] == 0 and nxt[0] is None
    assert prev[3] == SENTINEL and prev[1] == 3 and prev[0] == 1

    prev, nxt = build_links([7])  # a one-member prefix still threads
    assert nxt[SENTINEL] == 7 and nxt[7] is None and prev[7] == SENTINEL


def test_column_delete_restore_roundtrip():
    members = [3, 1, 0]
    rects = RectList([(0, 9)] * 4)
    block_of, sizes = build_blocks(rects, 1, members)
    prev, nxt = build_links(members)
    col = PrefixColumn(1, members, block_of, sizes, prev, nxt)
    before = col.snapshot()
    assert col.delete(1)
    assert col.next[SENTINEL] == 3 and col.next[3] == 0
    assert col.restore(1)
    assert col.snapshot() == before
    assert not col.delete(9)  # not a member: no-op


def fixture_state(budget=2):
    rects = RectList([(5, 10), (5, 20), (0, 6), (0, 30)])
    return preprocess(rects, budget)


def test_preprocess_structures():
    state = fixture_state()
    lower, upper = state.columns
    assert lower.members == (0, 1, 2)
    assert lower.block_sizes == [2, 1]
    assert upper.members == (2, 0, 1)
    assert upper.block_sizes == [1, 1, 1]
    assert state.smallest(0) == 0 and state.smallest(1) == 2


def test_delete_outside_every_prefix_is_noop():
    state = fixture_state()
    # row 3 is in neither two-column prefix for budget 2
    assert all(3 not in col.block_of for col in state.columns)
    before = tuple(col.snapshot() for col in state.columns)
    state.delete_index(3)
    assert tuple(col.snapshot() for col in state.columns) == before
    state.restore_index(3)


def test_smallest_walks_the_prefix():
    state = fixture_state()
    assert state.smallest(1) == 2
    state.delete_index(2)
    assert state.smallest(1) == 0
    state.delete_index(0)
    assert state.smallest(1) == 1  # budget deletions leave the last member
    state.restore_index(0)
    state.restore_index(2)


def test_delete_restore_stack_discipline():
    state = fixture_state()
    state.delete_index(0)
    with pytest.raises(AssertionError):
        state.delete_index(0)
    state.delete_index(1)
    with pytest.raises(AssertionError):
        state.restore_index(0)
    state.restore_index(1)
    state.restore_index(0)


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_balanced_delete_restore_is_identity(data):
    n = data.draw(st.integers(min_value=3, max_value=10))
    d = data.draw(st.integers(min_value=1, max_value=2))
    rows = [
        tuple(data.draw(st.integers(min_value=0, max_value=5)) for _ in range(2 * d))
        for _ in range(n)
    ]
    rects = RectList(rows)
    budget = data.draw(st.integers(min_value=1, max_value=min(4, n - 1)))
    state = preprocess(rects, budget)
    before = state.snapshot()

    victims = data.draw(
        st.lists(
            st.integers(min_value=0, max_value=n - 1),
            min_size=0,
            max_size=budget,
            unique=True,
        )
    )

    def nest(remaining):
        if not remaining:
            return
        j = remaining[0]
        state.delete_index(j)
        nest(remaining[1:])
        state.restore_index(j)

    nest(victims)
    assert state.snapshot() == before


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_barrier_matches_full_list(data):
    """The prefix minimum equals the full-list minimum under any
    deletion set within budget, and never drains."""
    n = data.draw(st.integers(min_value=2, max_value=12))
    d = data.draw(st.integers(min_value=1, max_value=2))
    rows = [
        tuple(data.draw(st.integers(min_value=0, max_value=4)) for _ in range(2 * d))
        for _ in range(n)
    ]
    rects = RectList(rows)
    budget = data.draw(st.integers(min_value=1, max_value=min(4, n - 1)))
    victims = data.draw(
        st.lists(
            st.integers(min_value=0, max_value=n - 1),
            min_size=0,
            max_size=budget,
            unique=True,
        )
    )
    state = preprocess(rects, budget)
    for j in victims:
        state.delete_index(j)
    gone = set(victims)
    for c in range(2 * rects.ndim):
        lead = state.smallest(c)  # asserts availability
        full = min(
            (j for j in range(n) if j not in gone),
            key=lambda j: order_key(rects, c, j),
        )
        assert rects.coord(lead, c) == rects.coord(full, c)
        assert lead == full  # index tie-break agrees as well
    for j in reversed(victims):
        state.restore_index(j)


def test_truncated_last_block_is_benign():
    """If a column minimum sits in the prefix's last block with recorded
    live size 1, either the full-list block is also down to one live row
    or the whole budget is already spent."""
    values = range(3)
    n, budget = 5, 2
    import itertools

    for combo in itertools.product(values, repeat=n):
        rows = [(v, 0) for v in combo]
        rects = RectList(rows)
        state = preprocess(rects, budget)
        col = state.columns[0]
        last_block = len(col.block_sizes) - 1
        for victims in itertools.chain.from_iterable(
            itertools.combinations(range(n), k) for k in range(budget + 1)
        ):
            for j in victims:
                state.delete_index(j)
            lead = state.smallest(0)
            if (
                col.block_of[lead] == last_block
                and col.block_sizes[last_block] == 1
            ):
                gone = set(victims)
                true_block_live = sum(
                    1
                    for j in range(n)
                    if j not in gone and rows[j][0] == rows[lead][0]
                )
                assert true_block_live == 1 or len(victims) == budget
            for j in reversed(victims):
                state.restore_index(j)
