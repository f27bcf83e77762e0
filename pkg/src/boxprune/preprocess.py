"""Per-column ordered prefixes with block tables and restorable linked lists.

With a discard budget of r, the search only ever looks at the r+1 rows
that come first in each endpoint column's order; everything beyond that
prefix can never become a column minimum.  This module selects those
prefixes, groups each into blocks of equal coordinate value, and threads
each into a doubly linked list whose entries keep their stale links on
deletion so a LIFO restore is O(1) per column.

Selection has two interchangeable backends that produce identical
prefixes: a seeded in-place quickselect that works for any exact scalar,
and a vectorized numpy argpartition path for int/float matrices.
"""

from __future__ import annotations

import random
from typing import Optional

import numpy as np

from .core import InputError, RectList

SENTINEL = -1  # linked-list head key; never a valid row index

SELECTION_METHODS = ("auto", "numpy", "python")


def select_prefix(
    rects: RectList,
    column: int,
    budget: int,
    *,
    method: str = "auto",
    rng: Optional[random.Random] = None,
) -> list[int]:
    """Row indices of the budget+1 first rows in the column order, ascending.

    Expected O(N) pivot selection plus an O(budget log budget) sort of
    the prefix; the index tie-break makes the boundary element unique,
    so the result is independent of pivot choices.
    """
    if not 0 < budget < rects.n:
        raise InputError(f"budget must satisfy 0 < budget < {rects.n}, got {budget}")
    if method == "auto":
        method = "numpy" if rects.as_array() is not None else "python"
    if method == "numpy":
        arr = rects.as_array()
        if arr is None:
            raise InputError("numpy selection needs int or float coordinates")
        return _select_numpy(arr[:, column], column, budget)
    if method == "python":
        return _select_python(rects.column_values(column), column, budget, rng)
    raise InputError(f"unknown selection method {method!r}")


def _select_python(values: list, column: int, budget: int, rng) -> list[int]:
    if rng is None:
        rng = random.Random(0)
    descending = column % 2 == 0
    idx = list(range(len(values)))
    _partial_select(idx, values, descending, budget, rng)
    prefix = sorted(idx[: budget + 1])
    # stable second pass by value keeps the index order inside ties
    prefix.sort(key=values.__getitem__, reverse=descending)
    return prefix


def _partial_select(idx: list, vals: list, descending: bool, k: int, rng) -> None:
    """Rearrange idx so idx[:k+1] are the k+1 first rows of the column
    order (random pivots, expected linear; the quadratic worst case is
    accepted)."""
    lo, hi = 0, len(idx) - 1
    while lo < hi:
        mid = _partition(idx, vals, descending, lo, hi, rng)
        if mid == k:
            return
        if k < mid:
            hi = mid - 1
        else:
            lo = mid + 1


def _partition(idx: list, vals: list, descending: bool, lo: int, hi: int, rng) -> int:
    # median of three random probes tames the pivot-luck variance
    if hi - lo > 8:
        probes = (
            rng.randrange(lo, hi + 1),
            rng.randrange(lo, hi + 1),
            rng.randrange(lo, hi + 1),
        )
        if descending:
            p = sorted(probes, key=lambda q: (-vals[idx[q]], idx[q]))[1]
        else:
            p = sorted(probes, key=lambda q: (vals[idx[q]], idx[q]))[1]
    else:
        p = rng.randrange(lo, hi + 1)
    idx[p], idx[hi] = idx[hi], idx[p]
    pj = idx[hi]
    pv = vals[pj]
    store = lo
    if descending:
        for pos in range(lo, hi):
            j = idx[pos]
            v = vals[j]
            if v > pv or (v == pv and j < pj):
                idx[store], idx[pos] = j, idx[store]
                store += 1
    else:
        for pos in range(lo, hi):
            j = idx[pos]
            v = vals[j]
            if v < pv or (v == pv and j < pj):
                idx[store], idx[pos] = j, idx[store]
                store += 1
    idx[store], idx[hi] = idx[hi], idx[store]
    return store


def _select_numpy(col: np.ndarray, column: int, budget: int) -> list[int]:
    vals = -col if column % 2 == 0 else col
    part = np.argpartition(vals, budget)
    pivot = vals[part[budget]]
    below = np.flatnonzero(vals < pivot)
    need = budget + 1 - below.size
    ties = np.flatnonzero(vals == pivot)[:need]
    members = np.concatenate([below, ties])
    order = np.lexsort((members, vals[members]))
    return [int(m) for m in members[order]]


def build_blocks(rects: RectList, column: int, members: list[int]):
    """Group a sorted prefix into runs of equal coordinate value.

    Returns (row -> block number, size per block); blocks are numbered
    0.. from the front of the prefix.
    """
    block_of: dict[int, int] = {}
    sizes: list[int] = []
    prev_value = None
    for j in members:
        v = rects.coord(j, column)
        if sizes and v == prev_value:
            sizes[-1] += 1
        else:
            sizes.append(1)
        block_of[j] = len(sizes) - 1
        prev_value = v
    return block_of, sizes


def build_links(members: list[int]):
    """Thread a sorted prefix into a doubly linked list hanging off
    SENTINEL; the tail's next is None."""
    prev: dict[int, int] = {}
    nxt: dict[int, Optional[int]] = {}
    last = SENTINEL
    for j in members:
        nxt[last] = j
        prev[j] = last
        last = j
    nxt[last] = None
    return prev, nxt


class PrefixColumn:
    """Live state for one endpoint column.

    Deleting a row unlinks it and decrements its block's live size;
    the stale links are kept in place so that restoring the most
    recently deleted row is a constant-time relink.
    """

    __slots__ = ("column", "members", "block_of", "block_sizes", "prev", "next", "live")

    def __init__(self, column, members, block_of, block_sizes, prev, nxt):
        self.column = column
        self.members = tuple(members)
        self.block_of = block_of
        self.block_sizes = block_sizes
        self.prev = prev
        self.next = nxt
        self.live = len(members)

    def smallest(self) -> Optional[int]:
        return self.next[SENTINEL]

    def delete(self, j: int) -> bool:
        """Unlink j if it belongs to this column's prefix; no-op otherwise."""
        b = self.block_of.get(j)
        if b is None:
            return False
        p = self.prev[j]
        n = self.next[j]
        self.next[p] = n
        if n is not None:
            self.prev[n] = p
        self.block_sizes[b] -= 1
        self.live -= 1
        return True

    def restore(self, j: int) -> bool:
        """Relink j through its stale links; only valid in LIFO order."""
        b = self.block_of.get(j)
        if b is None:
            return False
        p = self.prev[j]
        n = self.next[j]
        self.next[p] = j
        if n is not None:
            self.prev[n] = j
        self.block_sizes[b] += 1
        self.live += 1
        return True

    def snapshot(self):
        return (dict(self.next), dict(self.prev), tuple(self.block_sizes), self.live)


class Preprocessed:
    """All 2d column structures plus the deletion stack.

    Single-owner and mutable: one search at a time.  delete_index and
    restore_index are O(d); restores must mirror deletes in LIFO order
    (asserted), which is exactly what a depth-first search does.
    """

    def __init__(self, rects: RectList, budget: int, columns: list[PrefixColumn]):
        self.rects = rects
        self.budget = budget
        self.columns = columns
        self._deleted: list[int] = []

    def delete_index(self, j: int) -> None:
        assert j not in self._deleted, f"row {j} deleted twice"
        self._deleted.append(j)
        for col in self.columns:
            col.delete(j)

    def restore_index(self, j: int) -> None:
        assert self._deleted and self._deleted[-1] == j, "restores must be LIFO"
        self._deleted.pop()
        for col in self.columns:
            col.restore(j)

    def smallest(self, column: int) -> int:
        j = self.columns[column].smallest()
        # With at most `budget` outstanding deletions a prefix of size
        # budget+1 cannot drain.
        assert j is not None, f"column {column} drained"
        return j

    @property
    def deletions(self) -> int:
        return len(self._deleted)

    def snapshot(self):
        return tuple(col.snapshot() for col in self.columns), tuple(self._deleted)


def preprocess(
    rects: RectList,
    budget: int,
    *,
    selection: str = "auto",
    seed: int = 0,
) -> Preprocessed:
    """Build every column structure; O(d(N + budget log budget))."""
    if not 0 < budget < rects.n:
        raise InputError(f"budget must satisfy 0 < budget < {rects.n}, got {budget}")
    rng = random.Random(seed)
    columns = []
    for c in range(2 * rects.ndim):
        members = select_prefix(rects, c, budget, method=selection, rng=rng)
        block_of, sizes = build_blocks(rects, c, members)
        prev, nxt = build_links(members)
        columns.append(PrefixColumn(c, members, block_of, sizes, prev, nxt))
    return Preprocessed(rects, budget, columns)
