"""Discard a few axis-aligned boxes so the rest overlap as much as possible.

Given N boxes (duplicates welcome) and a budget r < N, `solve` reports,
for every s up to r, an optimal set of s boxes to discard so that the
intersection of the remaining ones has the lexicographically largest
(dimension, volume).  Runtime is linear in N for fixed r and dimension.
"""

from .core import (
    DRect,
    DVolume,
    InputError,
    RectList,
    compare_dvolume,
    dvolume,
    intersect,
)
from .search import Answer, SearchStats, SolveResult, run_search, solve

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "DRect",
    "DVolume",
    "InputError",
    "RectList",
    "SearchStats",
    "SolveResult",
    "compare_dvolume",
    "dvolume",
    "intersect",
    "run_search",
    "solve",
    "__version__",
]
