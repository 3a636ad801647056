"""Sorted, weighted input and the prefix sums every algorithm runs on.

All index ranges are half-open ``[start, stop)``. Prefix sums are stored
with a leading zero so that the sum over ``[start, stop)`` is simply
``cum[stop] - cum[start]``; the length-``n`` views exposed as ``weight``,
``weighted_value`` and ``weighted_square`` follow the usual convention
``array[j] = sum over i <= j``.

The stored value sums are taken about an ``offset`` (the median value)
rather than about zero. Data such as ``1e6 + noise`` would otherwise lose
every significant digit of its spread to cancellation in
``sum w*x^2 - 2c sum w*x + c^2 sum w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

# float64 is the widest floating type numpy supports portably
PREFIX_DTYPE = np.float64
INDEX_DTYPE = np.int64


class InvalidInputError(ValueError):
    """Raised for empty datasets, non-finite values or negative weights."""


class IndexRange(NamedTuple):
    start: int
    stop: int

    @property
    def size(self) -> int:
        return self.stop - self.start

    def check(self, n: int) -> "IndexRange":
        if not (0 <= self.start <= self.stop <= n):
            raise IndexError(f"range [{self.start}, {self.stop}) out of bounds for length {n}")
        return self


@dataclass(frozen=True)
class SortedInput:
    """Values sorted ascending with aligned non-negative weights.

    ``order`` maps sorted positions back to positions in the caller's
    original array (``values == original[order]``). It is ``None`` when the
    data was handed over already sorted.
    """

    values: np.ndarray
    weights: np.ndarray
    order: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.values.ndim != 1 or self.values.shape != self.weights.shape:
            raise InvalidInputError("values and weights must be 1-D arrays of equal length")

    def __len__(self) -> int:
        return self.values.shape[0]

    @property
    def full_range(self) -> IndexRange:
        return IndexRange(0, len(self))

    @property
    def is_unweighted(self) -> bool:
        return bool(np.all(self.weights == 1.0))

    @classmethod
    def from_sorted(cls, values, weights=None, check: bool = True) -> "SortedInput":
        """Wrap data that is already sorted, skipping the sort."""
        values, weights = _validated(values, weights)
        if check and values.shape[0] > 1 and np.any(values[1:] < values[:-1]):
            raise InvalidInputError("values are not sorted ascending")
        return cls(values, weights, None)


def _validated(values, weights):
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 1:
        values = values.ravel()
    if values.shape[0] == 0:
        raise InvalidInputError("empty dataset")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("invalid element: non-finite value")
    if weights is None:
        weights = np.ones_like(values)
    else:
        weights = np.asarray(weights, dtype=np.float64).ravel()
        if weights.shape != values.shape:
            raise InvalidInputError(
                f"invalid element: {weights.shape[0]} weights for {values.shape[0]} values")
        if not np.all(np.isfinite(weights)) or np.any(weights < 0):
            raise InvalidInputError("invalid element: weights must be finite and non-negative")
    return values, weights


def sort_and_align(values: Sequence[float], weights: Optional[Sequence[float]] = None) -> SortedInput:
    """Sort ``values`` ascending, carrying each weight along with its value.

    The sort is stable, so equal values keep their original relative order
    and weight alignment is deterministic. Missing weights become all-ones.

    Raises:
        InvalidInputError: on an empty dataset, a NaN/inf value, or a
            negative or non-finite weight.
    """
    values, weights = _validated(values, weights)
    order = np.argsort(values, kind="stable")
    return SortedInput(values[order], weights[order], order)


@dataclass(frozen=True)
class PrefixSums:
    """Cumulative sums with a leading zero, values taken relative to ``offset``.

    ``cum_weighted_value`` and ``cum_weighted_square`` accumulate
    ``w * (x - offset)`` and ``w * (x - offset)**2``. Algorithms work on these
    directly and shift centroids by ``offset``; the ``weighted_value`` and
    ``weighted_square`` views translate back to plain ``w*x`` and ``w*x^2``.
    """

    cum_weight: np.ndarray
    cum_weighted_value: np.ndarray
    cum_weighted_square: np.ndarray
    offset: float = 0.0

    def __len__(self) -> int:
        return self.cum_weight.shape[0] - 1

    @property
    def weight(self) -> np.ndarray:
        return self.cum_weight[1:]

    @property
    def weighted_value(self) -> np.ndarray:
        return self.cum_weighted_value[1:] + self.offset * self.weight

    @property
    def weighted_square(self) -> np.ndarray:
        m = self.offset
        return self.cum_weighted_square[1:] + 2 * m * self.cum_weighted_value[1:] + m * m * self.weight

    def sums(self, start: int, stop: int) -> tuple[float, float, float]:
        """(sum w, sum w*x, sum w*x^2) over ``[start, stop)`` in O(1)."""
        m = self.offset
        w = self.cum_weight[stop] - self.cum_weight[start]
        wd = self.cum_weighted_value[stop] - self.cum_weighted_value[start]
        wdd = self.cum_weighted_square[stop] - self.cum_weighted_square[start]
        return float(w), float(wd + m * w), float(wdd + 2 * m * wd + m * m * w)

    def spread(self, start: int, stop: int) -> float:
        """sum w*(x - offset)^2 over ``[start, stop)``: a scale for tolerances."""
        return float(self.cum_weighted_square[stop] - self.cum_weighted_square[start])


def _cumsum_with_zero(a: np.ndarray) -> np.ndarray:
    out = np.empty(a.shape[0] + 1, dtype=PREFIX_DTYPE)
    out[0] = 0.0
    np.cumsum(a, dtype=PREFIX_DTYPE, out=out[1:])
    return out


def median_offset(values: np.ndarray) -> float:
    """Reference point for centred sums: the middle element of sorted values."""
    return float(values[values.shape[0] // 2])


def build_prefix_sums(data: SortedInput) -> PrefixSums:
    """Build the three prefix-sum arrays in O(n)."""
    offset = median_offset(data.values)
    d = data.values.astype(PREFIX_DTYPE, copy=False) - offset
    w = data.weights.astype(PREFIX_DTYPE, copy=False)
    wd = w * d
    return PrefixSums(_cumsum_with_zero(w), _cumsum_with_zero(wd), _cumsum_with_zero(wd * d), offset)


def range_sum(array: np.ndarray, span: IndexRange) -> float:
    """Sum of the original elements over ``span`` given their inclusive prefix sums.

    ``array[j]`` holds the sum of elements ``0..j``; ``array[-1]`` is taken
    as zero, so an empty range yields 0.
    """
    start, stop = IndexRange(*span).check(len(array))
    if start == stop:
        return 0.0
    hi = array[stop - 1]
    return float(hi - array[start - 1]) if start > 0 else float(hi)
