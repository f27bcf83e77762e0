"""Brute-force ground truth and counting formulas.

Everything here works from the full row set with plain scans and sorts,
sharing no state with the preprocessing or the search.  Slow on purpose:
it exists to be obviously correct, for property tests and the CLI
cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .core import (
    DRect,
    DVolume,
    InputError,
    RectList,
    dvolume,
    intersect,
    order_key,
    order_strict,
)

DEFAULT_MAX_SUBSETS = 10**6

# Word characters, duplicated from the search module on purpose: the
# oracle must not import anything from the code paths it checks.
DELETE_CHAR = "D"
SHIFT_CHAR = "S"


class EnumerationBudgetError(RuntimeError):
    """Raised instead of silently truncating an oversized enumeration."""


def subset_count(n: int, r: int) -> int:
    """Number of discard sets of size at most r."""
    return sum(math.comb(n, s) for s in range(min(r, n) + 1))


def _guard(count: int, limit: int) -> None:
    if count > limit:
        raise EnumerationBudgetError(
            f"{count} subsets exceed the enumeration budget of {limit}"
        )


def brute_force_best(
    rects: RectList,
    s: int,
    *,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> tuple[DVolume, frozenset[int]]:
    """Exact optimum over every size-s discard set, with one witness
    (the first in lexicographic subset order on ties)."""
    if not 0 <= s < rects.n:
        raise InputError(f"discard count must satisfy 0 <= s < {rects.n}, got {s}")
    _guard(math.comb(rects.n, s), max_subsets)
    everything = range(rects.n)
    best = None
    witness = None
    for drop in itertools.combinations(everything, s):
        dropped = set(drop)
        kept = [j for j in everything if j not in dropped]
        value = dvolume(intersect(rects, kept))
        if best is None or value > best:
            best, witness = value, dropped
    return best, frozenset(witness)


def maximal_discards(rects: RectList, box: DRect) -> frozenset[int]:
    """Every row that does not contain the given box.  For a non-empty
    intersection this is the largest discard set that produces it."""
    return frozenset(j for j in range(rects.n) if not box.issubset(rects.rect(j)))


def enumerate_discard_sets(
    rects: RectList,
    budget: int,
    *,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> set[frozenset[int]]:
    """All maximal discard sets of the non-empty intersections reachable
    by discarding at most `budget` rows."""
    if not 0 <= budget < rects.n:
        raise InputError(f"budget must satisfy 0 <= budget < {rects.n}, got {budget}")
    _guard(subset_count(rects.n, budget), max_subsets)
    everything = range(rects.n)
    found: set[frozenset[int]] = set()
    for s in range(budget + 1):
        for drop in itertools.combinations(everything, s):
            dropped = set(drop)
            kept = [j for j in everything if j not in dropped]
            box = intersect(rects, kept)
            if not box.is_empty:
                found.add(maximal_discards(rects, box))
    return found


def _column_lead(rects: RectList, column: int, excluded) -> int:
    """First row in the column order among rows not excluded."""
    best = None
    best_key = None
    for j in range(rects.n):
        if j in excluded:
            continue
        key = order_key(rects, column, j)
        if best_key is None or key < best_key:
            best, best_key = j, key
    return best


def barrier_vector(rects: RectList, excluded) -> tuple:
    """Per column, the coordinate of the first surviving row; the
    intersection of the survivors is exactly this vector."""
    excluded = frozenset(excluded)
    if len(excluded) >= rects.n:
        raise InputError("cannot exclude every row")
    return tuple(
        rects.coord(_column_lead(rects, c, excluded), c)
        for c in range(2 * rects.ndim)
    )


def is_maximal_discard_set(rects: RectList, candidate) -> bool:
    """Membership test from first principles: the survivors' barrier box
    must be non-empty, and every discarded row must sit strictly before
    the surviving lead in some column."""
    x = frozenset(candidate)
    if len(x) >= rects.n:
        raise InputError("discard set must leave at least one row")
    leads = [_column_lead(rects, c, x) for c in range(2 * rects.ndim)]
    for t in range(rects.ndim):
        lo = rects.coord(leads[2 * t], 2 * t)
        hi = rects.coord(leads[2 * t + 1], 2 * t + 1)
        if lo > hi:
            return False
    for j in x:
        if not any(
            order_strict(rects, c, j, leads[c]) for c in range(2 * rects.ndim)
        ):
            return False
    return True


def canonical_word(rects: RectList, discards) -> str:
    """The unique legal word that deletes exactly this maximal discard
    set: each row is deleted at the first column where it sits strictly
    before the surviving lead."""
    x = frozenset(discards)
    if not is_maximal_discard_set(rects, x):
        raise InputError(f"{sorted(x)} is not a maximal discard set")
    leads = [_column_lead(rects, c, x) for c in range(2 * rects.ndim)]
    remaining = set(x)
    parts = []
    for c in range(2 * rects.ndim):
        batch = {j for j in remaining if order_strict(rects, c, j, leads[c])}
        parts.append(DELETE_CHAR * len(batch) + SHIFT_CHAR)
        remaining -= batch
    assert not remaining
    return "".join(parts)


def replay_word(rects: RectList, word: str) -> list[int]:
    """Run a delete/shift word against the full row set and return the
    deletion sequence.  Each delete removes the current focus column's
    first surviving row; each shift advances the focus.  Independent of
    the search structures, for cross-checking leaf words."""
    columns = 2 * rects.ndim
    deleted: list[int] = []
    gone: set[int] = set()
    focus = 0
    for ch in word:
        if ch == SHIFT_CHAR:
            focus += 1
            if focus > columns:
                raise InputError("word shifts past the last column")
        elif ch == DELETE_CHAR:
            if focus >= columns:
                raise InputError("word deletes after the final shift")
            if len(gone) >= rects.n:
                raise InputError("word deletes every row")
            j = _column_lead(rects, focus, gone)
            deleted.append(j)
            gone.add(j)
        else:
            raise InputError(f"bad word character {ch!r}")
    if focus != columns:
        raise InputError(f"word has {focus} shifts, needs {columns}")
    return deleted


def step_bound(p: int, s: int, d: int) -> int:
    """Closed form of the per-call work recurrence: 1 at s=0, s+1 at
    p=0, and f(p,s) = f(p-1,s) + f(p,s-1) + d inside."""
    if p < 0 or s < 0 or d < 0:
        raise InputError("arguments must be nonnegative")
    return d * math.comb(p + s, s) + math.comb(p + s + 1, s) - d


def call_bound(p: int, s: int) -> int:
    """Upper bound on explore invocations: the d=1 instance of the step
    recurrence, which adds 1 per call instead of d."""
    return step_bound(p, s, 1)


@dataclass(frozen=True)
class OracleEntry:
    s: int
    best: DVolume
    witness: frozenset[int]
    optimal_count: int


def oracle_report(
    rects: RectList,
    budget: int,
    *,
    max_subsets: int = DEFAULT_MAX_SUBSETS,
) -> list[OracleEntry]:
    """Per discard count: the exact optimum, one witness, and how many
    subsets achieve it."""
    if not 0 <= budget < rects.n:
        raise InputError(f"budget must satisfy 0 <= budget < {rects.n}, got {budget}")
    _guard(subset_count(rects.n, budget), max_subsets)
    everything = range(rects.n)
    report = []
    for s in range(budget + 1):
        best = None
        witness = None
        count = 0
        for drop in itertools.combinations(everything, s):
            dropped = set(drop)
            kept = [j for j in everything if j not in dropped]
            value = dvolume(intersect(rects, kept))
            if best is None or value > best:
                best, witness, count = value, dropped, 1
            elif value == best:
                count += 1
        report.append(OracleEntry(s, best, frozenset(witness), count))
    return report
