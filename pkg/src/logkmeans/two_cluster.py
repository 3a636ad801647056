"""O(log n) two-cluster k-means by binary search over division intervals.

A division ``d`` splits ``[start, stop)`` into ``[start, d)`` and
``[d, stop)``. Its midpoint is the mean of the two side centroids, and the
midpoint moves right (never left) as ``d`` moves right. Comparing the
midpoint with the two values around the division therefore tells the search
which half still holds a Lloyd fixed point.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numba
import numpy as np

from .core import INDEX_DTYPE, IndexRange, PrefixSums, SortedInput
from .partition import Clustering, range_centroid, total_wcss


class Pointing(enum.Enum):
    RIGHT = "right-pointing"
    LEFT = "left-pointing"
    CONVERGENT = "convergent"


class ZeroWeightSideError(ValueError):
    pass


@dataclass(frozen=True)
class DivisionProbe:
    division: int
    left_centroid: float
    right_centroid: float
    midpoint: float
    pointing: Pointing


def _classify(values: np.ndarray, d: int, midpoint: float) -> Pointing:
    # A point exactly on the midpoint belongs to the right cluster, so a
    # midpoint equal to values[d-1] would pull that point rightwards.
    if midpoint > values[d]:
        return Pointing.RIGHT
    if midpoint <= values[d - 1]:
        return Pointing.LEFT
    return Pointing.CONVERGENT


def classify_division(data: SortedInput, prefix: PrefixSums, d: int,
                      span: Optional[IndexRange] = None) -> DivisionProbe:
    """Centroids, midpoint and pointing of division ``d`` in O(1).

    Raises:
        ZeroWeightSideError: if either side carries no weight.
    """
    start, stop = span if span is not None else (0, len(data))
    if not start < d < stop:
        raise IndexError(f"division {d} outside ({start}, {stop})")
    cw, cwx = prefix.cum_weight, prefix.cum_weighted_value
    left_w = cw[d] - cw[start]
    right_w = cw[stop] - cw[d]
    if left_w == 0 or right_w == 0:
        raise ZeroWeightSideError(f"zero-weight side at division {d}")
    left = range_centroid(prefix, data, (start, d))
    right = range_centroid(prefix, data, (d, stop))
    midpoint = (left + right) / 2
    return DivisionProbe(d, left, right, midpoint, _classify(data.values, d, midpoint))


_CONVERGED, _UNCONVERGED, _POINT_MASS = 0, 1, 2


@numba.njit(cache=True)
def _search_division(values, cw, cwx, offset, start, stop):
    """Binary search for a convergent division; needs >= 3 points and positive weight.

    ``cwx`` holds cumulative ``w * (x - offset)``.

    Returns ``(division, left, right, probes, status)``. Centroids are only
    meaningful for ``_CONVERGED`` and ``_POINT_MASS``.
    """
    # Positive-weight points are where the cumulative weight steps up.
    steps = cw[start + 1:stop + 1]
    first = np.searchsorted(steps, cw[start], side="right") + start
    last = np.searchsorted(steps, cw[stop], side="left") + start
    if values[first] == values[last]:
        return stop, values[last], values[last], 0, _POINT_MASS

    floor = start + 1
    ceiling = stop - 1
    probes = 0
    while floor < ceiling:
        d = (floor + ceiling) // 2
        probes += 1
        left_w = cw[d] - cw[start]
        if left_w == 0:
            floor = d + 1
            continue
        right_w = cw[stop] - cw[d]
        if right_w == 0:
            ceiling = d - 1
            continue
        # clamped exactly as range_centroid does
        left = min(max(offset + (cwx[d] - cwx[start]) / left_w, values[start]), values[d - 1])
        right = min(max(offset + (cwx[stop] - cwx[d]) / right_w, values[d]), values[stop - 1])
        midpoint = (left + right) / 2
        # same comparisons as _classify
        if midpoint > values[d]:
            floor = d + 1
        elif midpoint <= values[d - 1]:
            ceiling = d - 1
        else:
            return d, left, right, probes, _CONVERGED
    d = min(max((floor + ceiling) // 2, start + 1), stop - 1)
    return d, 0.0, 0.0, probes, _UNCONVERGED


def split_range(data: SortedInput, prefix: PrefixSums, start: int, stop: int):
    """Core of :func:`two_cluster` without building a result object.

    Returns ``(left, right, division, probes, degenerate)``.
    """
    size = stop - start
    values = data.values
    if size <= 0:
        raise ValueError("two_cluster needs a non-empty range")
    if size == 1:
        v = float(values[start])
        return v, v, start + 1, 0, True
    if size == 2:
        if values[start] == values[start + 1]:
            v = float(values[start])
            return v, v, start + 1, 0, True
        # w*x/w may differ from x in the last bit; use the value Lloyd would compute
        return (range_centroid(prefix, data, (start, start + 1)),
                range_centroid(prefix, data, (start + 1, stop)), start + 1, 0, False)

    cw = prefix.cum_weight
    if cw[stop] - cw[start] == 0:
        # no weight at all: split as if unweighted
        local = values[start:stop]
        cwx = np.empty(size + 1)
        cwx[0] = 0.0
        np.cumsum(local - prefix.offset, out=cwx[1:])
        d, left, right, probes, status = _search_division(
            local, np.arange(size + 1, dtype=np.float64), cwx, prefix.offset, 0, size)
        d += start
        if status == _POINT_MASS:
            return float(left), float(right), stop, probes, True
        # zero-weight clusters take the plain mean, computed the same way Lloyd does
        return (range_centroid(prefix, data, (start, d)), range_centroid(prefix, data, (d, stop)),
                d, probes, False)

    d, left, right, probes, status = _search_division(values, cw, prefix.cum_weighted_value, prefix.offset,
                                                      start, stop)
    if status == _POINT_MASS:
        return float(left), float(right), stop, 0, True
    if status == _UNCONVERGED:
        left = range_centroid(prefix, data, (start, d))
        right = range_centroid(prefix, data, (d, stop))
    return float(left), float(right), int(d), int(probes), False


def two_cluster(data: SortedInput, prefix: PrefixSums, span: Optional[IndexRange] = None) -> Clustering:
    """Two-cluster k-means over ``span`` in O(log n).

    The returned clustering is a Lloyd fixed point except for the degenerate
    outputs, flagged via ``Clustering.degenerate``, where both centroids
    coincide:

    * a single point: both centroids equal it, division at ``start + 1``;
    * two equal points: division at ``start + 1``;
    * all weight sitting on one value: both centroids equal that value and
      every point goes to the left cluster (division at ``stop``).

    A range whose total weight is zero is solved as if unweighted.
    ``Clustering.iterations`` reports the number of divisions probed.
    """
    start, stop = IndexRange(*span).check(len(data)) if span is not None else data.full_range
    left, right, d, probes, degenerate = split_range(data, prefix, start, stop)
    centroids = np.array([left, right], dtype=np.float64)
    borders = np.array([start, d, stop], dtype=INDEX_DTYPE)
    wcss = 0.0 if degenerate else total_wcss(prefix, centroids, borders)
    return Clustering(centroids, borders, wcss, probes, True, degenerate)


def warm_up() -> None:
    """Compile (or load from cache) the search kernel ahead of timed runs."""
    values = np.array([0.0, 1.0, 9.0, 10.0])
    cum = np.concatenate(([0.0], np.cumsum(values)))
    _search_division(values, np.arange(5, dtype=np.float64), cum, 0.0, 0, 4)
