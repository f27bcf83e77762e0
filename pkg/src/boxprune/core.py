"""Exact primitives for axis-aligned boxes.

A box in dimension d is a flat tuple of 2d endpoint coordinates
(lo_1, hi_1, ..., lo_d, hi_d).  lo > hi is a legal encoding of the empty
set; the endpoints stay addressable even then, so downstream code can
keep doing arithmetic with them.  Coordinates are exact scalars (int,
float, or fractions.Fraction) compared with no tolerance; NaN and
infinite floats are rejected on input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np

Scalar = Union[int, float, Fraction]

# Limits for lossless numpy storage: int64 columns may get negated, and a
# float64 matrix must represent every integer it absorbs exactly.
_INT64_SAFE = 2**62
_FLOAT_SAFE = 2**53


class InputError(ValueError):
    """Malformed problem input: bad rows, bad budget, or an empty subset."""


def _check_scalar(value) -> None:
    if not isinstance(value, (int, float, Fraction)):
        raise InputError(f"coordinate {value!r} is not an exact scalar")
    if isinstance(value, float) and not math.isfinite(value):
        raise InputError(f"coordinate {value!r} is not finite")


@dataclass(frozen=True, order=True)
class DVolume:
    """Measure of a box: effective dimension plus volume, ordered
    lexicographically so that dimension dominates.

    dim is -1 for the empty set, 0 for a single point, otherwise the
    number of axes with positive extent; vol is the product of those
    positive extents (and 0 whenever dim <= 0).
    """

    dim: int
    vol: Scalar = 0

    def __post_init__(self):
        if self.dim < -1:
            raise InputError(f"dim must be >= -1, got {self.dim}")
        if self.dim <= 0 and self.vol != 0:
            raise InputError("empty and point boxes have volume 0")
        if self.dim > 0 and not self.vol > 0:
            raise InputError("a positive-dimension box needs positive volume")


def compare_dvolume(a: DVolume, b: DVolume) -> int:
    """-1, 0 or 1 as a sorts before, with, or after b."""
    if a == b:
        return 0
    return -1 if a < b else 1


@dataclass(frozen=True)
class DRect:
    """One axis-aligned box as a flat endpoint tuple."""

    bounds: tuple

    def __post_init__(self):
        bounds = tuple(self.bounds)
        if len(bounds) < 2 or len(bounds) % 2:
            raise InputError(
                f"need an even number (>= 2) of endpoints, got {len(bounds)}"
            )
        for v in bounds:
            _check_scalar(v)
        object.__setattr__(self, "bounds", bounds)

    @property
    def ndim(self) -> int:
        return len(self.bounds) // 2

    def lower(self, axis: int) -> Scalar:
        return self.bounds[2 * axis]

    def upper(self, axis: int) -> Scalar:
        return self.bounds[2 * axis + 1]

    @property
    def is_empty(self) -> bool:
        return any(self.lower(t) > self.upper(t) for t in range(self.ndim))

    def issubset(self, other: "DRect") -> bool:
        """Set containment; the empty set sits inside everything."""
        if self.ndim != other.ndim:
            raise InputError("dimension mismatch")
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return all(
            other.lower(t) <= self.lower(t) and self.upper(t) <= other.upper(t)
            for t in range(self.ndim)
        )


def _as_rect(rect) -> DRect:
    return rect if isinstance(rect, DRect) else DRect(tuple(rect))


def dvolume(rect) -> DVolume:
    """(dim, vol) of a box; total over every endpoint tuple.

    Any inverted axis makes the box empty, (-1, 0).  Zero-extent axes
    are skipped, so a box that is flat along some axes is measured in
    the dimensions where it actually extends; all axes flat gives the
    point value (0, 0).
    """
    r = _as_rect(rect)
    dim = 0
    vol: Scalar = 1
    for t in range(r.ndim):
        lo, hi = r.lower(t), r.upper(t)
        if lo > hi:
            return DVolume(-1, 0)
        if lo < hi:
            dim += 1
            vol = vol * (hi - lo)
    if dim == 0:
        return DVolume(0, 0)
    return DVolume(dim, vol)


class RectList:
    """An immutable list of N boxes sharing one dimension; rows may repeat.

    Coordinates live either in a list of exact scalar tuples or in a
    numpy matrix when every value fits one losslessly (ints within
    int64, or a float64 mix that stays exact).  The matrix only enables
    the vectorized selection backend; it never changes a comparison.
    """

    __slots__ = ("n", "ndim", "_rows", "_array", "_array_known")

    def __init__(self, rows):
        if isinstance(rows, np.ndarray):
            self._init_from_array(rows)
        else:
            self._init_from_rows(rows)

    def _init_from_array(self, arr: np.ndarray) -> None:
        if arr.ndim != 2:
            raise InputError(f"coordinate matrix must be 2-D, got shape {arr.shape}")
        n, width = arr.shape
        if n < 1 or width < 2 or width % 2:
            raise InputError(f"bad coordinate matrix shape {arr.shape}")
        if arr.dtype.kind in "iu":
            arr = arr.astype(np.int64)
        elif arr.dtype.kind == "f":
            arr = arr.astype(np.float64)
            if not np.isfinite(arr).all():
                raise InputError("coordinates must be finite")
        else:
            raise InputError(f"unsupported coordinate dtype {arr.dtype}")
        self._array = arr
        self._rows = None
        self._array_known = True
        self.n = n
        self.ndim = width // 2

    def _init_from_rows(self, rows) -> None:
        data = [tuple(row) for row in rows]
        if not data:
            raise InputError("need at least one box")
        width = len(data[0])
        if width < 2 or width % 2:
            raise InputError(f"rows need an even number (>= 2) of coordinates")
        for row in data:
            if len(row) != width:
                raise InputError("all rows must have the same width")
            for v in row:
                _check_scalar(v)
        self._rows = data
        self._array = None
        self._array_known = False
        self.n = len(data)
        self.ndim = width // 2

    @classmethod
    def from_rects(cls, rects: Iterable[DRect]) -> "RectList":
        return cls([r.bounds for r in rects])

    def row(self, j: int) -> tuple:
        if self._rows is not None:
            return self._rows[j]
        return tuple(self._array[j].tolist())

    def rect(self, j: int) -> DRect:
        return DRect(self.row(j))

    def coord(self, j: int, column: int) -> Scalar:
        """Endpoint of row j in flat column order (lo_1, hi_1, ...)."""
        if self._rows is not None:
            return self._rows[j][column]
        return self._array[j, column].item()

    def column_values(self, column: int) -> list:
        if self._rows is not None:
            return [row[column] for row in self._rows]
        return self._array[:, column].tolist()

    def as_array(self):
        """The lossless numpy matrix, or None when one cannot represent
        these coordinates exactly."""
        if not self._array_known:
            self._array = self._build_array()
            self._array_known = True
        return self._array

    def _build_array(self):
        all_int = True
        for row in self._rows:
            for v in row:
                if isinstance(v, int):
                    if abs(v) > _INT64_SAFE:
                        return None
                else:
                    all_int = False
        if all_int:
            return np.array(self._rows, dtype=np.int64)
        for row in self._rows:
            for v in row:
                if isinstance(v, int) and abs(v) > _FLOAT_SAFE:
                    return None
                if not isinstance(v, (int, float)):
                    return None
        return np.array(self._rows, dtype=np.float64)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"RectList(n={self.n}, ndim={self.ndim})"


def order_key(rects: RectList, column: int, j: int) -> tuple:
    """Sort key of row j in an endpoint column's order.

    Lower-endpoint columns (even index) order by decreasing value,
    upper-endpoint columns by increasing value; ties break toward the
    smaller row index, which makes every column order total.
    """
    v = rects.coord(j, column)
    return (-v, j) if column % 2 == 0 else (v, j)


def order_leq(rects: RectList, column: int, j: int, k: int) -> bool:
    """Total column order including the row-index tie-break."""
    return order_key(rects, column, j) <= order_key(rects, column, k)


def order_strict(rects: RectList, column: int, j: int, k: int) -> bool:
    """Strict value-only column order; equal coordinates are unrelated."""
    vj = rects.coord(j, column)
    vk = rects.coord(k, column)
    return vj > vk if column % 2 == 0 else vj < vk


def intersect(rects: RectList, indices) -> DRect:
    """Coordinate-wise intersection of the selected rows: the largest
    lower endpoint and smallest upper endpoint per axis.  This is taken
    as the definition even when the resulting point set is empty."""
    idx = list(indices)
    if not idx:
        raise InputError("cannot intersect an empty selection")
    for j in idx:
        if not 0 <= j < rects.n:
            raise InputError(f"row index {j} out of range 0..{rects.n - 1}")
    bounds = []
    for t in range(rects.ndim):
        lo = max(rects.coord(j, 2 * t) for j in idx)
        hi = min(rects.coord(j, 2 * t + 1) for j in idx)
        bounds.append(lo)
        bounds.append(hi)
    return DRect(tuple(bounds))
