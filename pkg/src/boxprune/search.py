"""Depth-first enumeration of legal delete/shift words.

The search walks a tree whose edges are moves: "D" deletes the current
column minimum, "S" shifts the focus to the next endpoint column.  Legal
words delete whole blocks of equal coordinate values, never touch a row
whose value anchors an already-passed column, and never shift past an
upper endpoint that fell below its partner lower endpoint.  Every leaf
is a complete word; its running (dim, vol) is the measure of the
intersection left by its deletions, recorded per exact deletion count.

Delete moves mutate the column structures and are undone on backtrack;
shift moves leave them alone.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import DVolume, InputError, RectList, Scalar
from .oracle import call_bound
from .preprocess import Preprocessed, preprocess

DELETE = "D"
SHIFT = "S"


class _Illegal:
    __slots__ = ()

    def __repr__(self):
        return "ILLEGAL"


ILLEGAL = _Illegal()

Child = Union[int, None, _Illegal]


@dataclass(slots=True)
class SearchNode:
    """One tree node; dim/vol are the running measure of the coordinate
    pairs completed so far (vol starts at 1, converted to the point
    value only when reported)."""

    parent: Optional[int]
    move: Optional[str]
    deleted: Optional[int]
    dim: int
    vol: Scalar
    delta_child: Child = None
    s_child: Child = None


class NodeStore:
    """Append-only node arena; handles are positions.  Nodes are never
    removed: pruning only overwrites downward child pointers, and parent
    pointers stay valid for walking leaves back to the root."""

    def __init__(self):
        self.nodes: list[SearchNode] = []
        self.leaves: list[int] = []

    def add(self, node: SearchNode) -> int:
        self.nodes.append(node)
        return len(self.nodes) - 1

    def node(self, handle: int) -> SearchNode:
        return self.nodes[handle]

    def __len__(self) -> int:
        return len(self.nodes)


class ResultsTable:
    """Best (dim, running vol) per exact deletion count, with the leaf
    handle that achieved it.  Ties keep the first leaf in search order."""

    def __init__(self, budget: int):
        self.budget = budget
        self.entries: list[Optional[tuple]] = [None] * (budget + 1)

    def update(self, p: int, dim: int, vol, handle: int) -> bool:
        cur = self.entries[p]
        if cur is None or (dim, vol) > (cur[0], cur[1]):
            self.entries[p] = (dim, vol, handle)
            return True
        return False

    def entry(self, p: int) -> Optional[tuple]:
        return self.entries[p]


@dataclass
class SearchStats:
    nodes: int = 0
    calls: int = 0
    call_bound: int = 0
    elapsed: float = 0.0


@dataclass(frozen=True)
class Answer:
    """Report for one discard count s.  Row indices are 0-based here;
    the CLI shifts them to 1-based.

    discard_minimal is the recorded optimum's own deletion set (in
    deletion order, size achieved_with <= s); discard_exact pads it with
    the smallest unused row indices up to exactly s, which cannot change
    the intersection.  When even the best choice of s rows leaves an
    empty intersection, empty is set and both sets are the first s rows.
    """

    s: int
    best: DVolume
    discard_minimal: tuple[int, ...]
    discard_exact: tuple[int, ...]
    achieved_with: int
    empty: bool


@dataclass
class SolveResult:
    answers: list[Answer]
    stats: SearchStats


def decide(
    p: int,
    s: int,
    state: Preprocessed,
    store: NodeStore,
    results: ResultsTable,
    handle: int,
) -> tuple[bool, bool]:
    """Mark which children of the current node are legal.

    At s == 0 the word is complete: both children become illegal and the
    results table is offered the node's measure.  Otherwise the delete
    move is vetoed when the budget is exhausted, when the focus block
    would not fit in the remaining budget, or when deleting the focus
    minimum would disturb the minimum value of an earlier column; the
    shift move is vetoed when it would close a coordinate pair with a
    negative extent, or while the block the previous delete started on
    is not yet finished.
    """
    node = store.nodes[handle]
    if s == 0:
        node.delta_child = ILLEGAL
        node.s_child = ILLEGAL
        store.leaves.append(handle)
        results.update(results.budget - p, node.dim, node.vol, handle)
        return False, False

    focus = len(state.columns) - s
    col = state.columns[focus]
    j = state.smallest(focus)

    delta_legal = True
    if p == 0:
        delta_legal = False
    elif col.block_sizes[col.block_of[j]] > p:
        # whole block must fit in the remaining budget
        delta_legal = False
    else:
        for i in range(focus):
            earlier = state.columns[i]
            bj = earlier.block_of.get(j)
            if bj is None:
                continue
            k = earlier.smallest()
            if bj == earlier.block_of[k] and earlier.block_sizes[bj] == 1:
                # j is the last live row holding column i's minimum value
                delta_legal = False
                break

    s_legal = True
    if focus % 2:
        k = state.smallest(focus - 1)
        if state.rects.coord(k, focus - 1) > state.rects.coord(j, focus):
            # closing this pair now would record a negative extent
            s_legal = False
    if s_legal and node.move == DELETE:
        if col.block_sizes[col.block_of[node.deleted]] > 0:
            # a started block must be deleted completely before shifting
            s_legal = False

    if not delta_legal:
        node.delta_child = ILLEGAL
    if not s_legal:
        node.s_child = ILLEGAL
    return delta_legal, s_legal


def explore(
    p: int,
    s: int,
    state: Preprocessed,
    store: NodeStore,
    results: ResultsTable,
    handle: int,
    stats: SearchStats,
) -> None:
    """Grow and visit both legal children depth-first, delete before
    shift; the column structures are restored before returning."""
    stats.calls += 1
    delta_legal, s_legal = decide(p, s, state, store, results, handle)
    node = store.nodes[handle]
    focus = len(state.columns) - s if s else None

    if delta_legal:
        j = state.smallest(focus)
        child = SearchNode(
            parent=handle, move=DELETE, deleted=j, dim=node.dim, vol=node.vol
        )
        ch = store.add(child)
        node.delta_child = ch
        state.delete_index(j)
        explore(p - 1, s, state, store, results, ch, stats)
        state.restore_index(j)
        if child.delta_child is ILLEGAL and child.s_child is ILLEGAL:
            node.delta_child = ILLEGAL

    if s_legal:
        dim, vol = node.dim, node.vol
        if focus % 2:
            # the pair (focus-1, focus) is complete: fold in its extent
            j = state.smallest(focus)
            k = state.smallest(focus - 1)
            extent = state.rects.coord(j, focus) - state.rects.coord(k, focus - 1)
            if extent > 0:
                vol = vol * extent
                dim = dim + 1
        child = SearchNode(parent=handle, move=SHIFT, deleted=None, dim=dim, vol=vol)
        ch = store.add(child)
        node.s_child = ch
        explore(p, s - 1, state, store, results, ch, stats)
        if child.delta_child is ILLEGAL and child.s_child is ILLEGAL:
            node.s_child = ILLEGAL


def run_search(
    rects: RectList,
    budget: int,
    *,
    selection: str = "auto",
    seed: int = 0,
) -> tuple[ResultsTable, NodeStore, SearchStats]:
    """Preprocess and explore the whole word tree from (budget, 2d)."""
    if not 0 < budget < rects.n:
        raise InputError(f"budget must satisfy 0 < budget < {rects.n}, got {budget}")
    state = preprocess(rects, budget, selection=selection, seed=seed)
    needed = budget + 2 * rects.ndim + 100
    if sys.getrecursionlimit() < needed:
        sys.setrecursionlimit(needed)

    store = NodeStore()
    root = store.add(SearchNode(parent=None, move=None, deleted=None, dim=0, vol=1))
    results = ResultsTable(budget)
    stats = SearchStats(call_bound=call_bound(budget, 2 * rects.ndim))
    started = time.perf_counter()
    explore(budget, 2 * rects.ndim, state, store, results, root, stats)
    stats.elapsed = time.perf_counter() - started
    stats.nodes = len(store)
    return results, store, stats


def extract_discards(store: NodeStore, handle: int) -> list[int]:
    """Deleted row indices along the root path, in deletion order."""
    out = []
    h = handle
    while h is not None:
        node = store.nodes[h]
        if node.move == DELETE:
            out.append(node.deleted)
        h = node.parent
    out.reverse()
    return out


def _pad(discards: tuple[int, ...], size: int, n: int) -> tuple[int, ...]:
    padded = list(discards)
    used = set(discards)
    j = 0
    while len(padded) < size:
        if j not in used:
            padded.append(j)
        j += 1
    return tuple(padded)


def finalize(
    results: ResultsTable,
    store: NodeStore,
    rects: RectList,
    budget: int,
) -> list[Answer]:
    """Per-s answers: running prefix maximum over deletion counts <= s,
    with the smallest count winning ties, then padding to exactly s."""
    answers = []
    best_dim, best_vol, best_p = -1, 0, None
    for s in range(budget + 1):
        entry = results.entry(s)
        if entry is not None and (entry[0], entry[1]) > (best_dim, best_vol):
            best_dim, best_vol, best_p = entry[0], entry[1], s
        if best_p is None:
            head = tuple(range(s))
            answers.append(Answer(s, DVolume(-1, 0), head, head, s, True))
            continue
        minimal = tuple(extract_discards(store, results.entry(best_p)[2]))
        exact = _pad(minimal, s, rects.n)
        best = DVolume(best_dim, best_vol if best_dim > 0 else 0)
        answers.append(Answer(s, best, minimal, exact, best_p, False))
    return answers


def solve(
    rects: RectList,
    budget: int,
    *,
    selection: str = "auto",
    seed: int = 0,
) -> SolveResult:
    """Optimal discard sets for every count from 0 up to the budget."""
    results, store, stats = run_search(rects, budget, selection=selection, seed=seed)
    return SolveResult(finalize(results, store, rects, budget), stats)
