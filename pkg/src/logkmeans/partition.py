"""Centroid/border conversion and O(1)-per-cluster centroid and WCSS queries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import INDEX_DTYPE, IndexRange, PrefixSums, SortedInput


@dataclass
class Clustering:
    """Result of any 1-D clustering run.

    Cluster ``i`` owns ``values[borders[i]:borders[i + 1]]`` and has centroid
    ``centroids[i]``. ``iterations`` counts Lloyd updates for the k-cluster
    path and division probes for the two-cluster path.
    """

    centroids: np.ndarray
    borders: np.ndarray
    wcss: float
    iterations: int = 0
    converged: bool = True
    degenerate: bool = False

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def to_dict(self) -> dict:
        return {
            "centroids": [float(c) for c in self.centroids],
            "borders": [int(b) for b in self.borders],
            "wcss": float(self.wcss),
            "iterations": int(self.iterations),
            "converged": bool(self.converged),
        }


def centroids_to_borders(data: SortedInput, sorted_centroids, span: Optional[IndexRange] = None) -> np.ndarray:
    """Cluster borders for ``sorted_centroids`` over ``span`` in O(k log n).

    Interior border ``i`` is the first index whose value is >= the midpoint
    of centroids ``i-1`` and ``i``; a point sitting exactly on a midpoint
    therefore joins the right-hand cluster.
    """
    start, stop = span if span is not None else (0, len(data))
    c = np.asarray(sorted_centroids, dtype=np.float64)
    if c.shape[0] > 1 and np.any(c[1:] < c[:-1]):
        raise ValueError("centroids must be sorted ascending")
    borders = np.empty(c.shape[0] + 1, dtype=INDEX_DTYPE)
    borders[0] = start
    borders[-1] = stop
    midpoints = (c[:-1] + c[1:]) / 2
    borders[1:-1] = np.searchsorted(data.values[start:stop], midpoints, side="left") + start
    return borders


def range_centroid(prefix: PrefixSums, data: SortedInput, span: IndexRange) -> float:
    """Weighted mean over ``span``; the plain mean if the span carries no weight.

    The mean is clamped to the range's smallest and largest value. Rounding
    in the prefix sums could otherwise push it an ulp outside, which moves
    points sitting exactly on a centroid between duplicate clusters.
    """
    start, stop = span
    if stop <= start:
        raise ValueError("centroid of an empty range is undefined")
    weight = prefix.cum_weight[stop] - prefix.cum_weight[start]
    values = data.values
    if weight == 0:
        return float(values[start:stop].mean())
    mean = prefix.offset + (prefix.cum_weighted_value[stop] - prefix.cum_weighted_value[start]) / weight
    return float(min(max(mean, values[start]), values[stop - 1]))


def range_wcss(prefix: PrefixSums, centroid: float, span: IndexRange) -> float:
    """sum w*x^2 - 2c sum w*x + c^2 sum w over ``span`` (evaluated about the offset)."""
    start, stop = span
    if stop <= start:
        return 0.0
    w, wd, wdd = cluster_sums(prefix, np.array([start, stop]))
    c = centroid - prefix.offset
    return float(wdd[0] - 2 * c * wd[0] + c * c * w[0])


def cluster_sums(prefix: PrefixSums, borders: np.ndarray):
    """Per-cluster sums of w, w*(x - offset) and w*(x - offset)^2 for a border vector."""
    lo, hi = borders[:-1], borders[1:]
    return (
        prefix.cum_weight[hi] - prefix.cum_weight[lo],
        prefix.cum_weighted_value[hi] - prefix.cum_weighted_value[lo],
        prefix.cum_weighted_square[hi] - prefix.cum_weighted_square[lo],
    )


def total_wcss(prefix: PrefixSums, centroids, borders) -> float:
    """Total weighted within-cluster sum of squares in O(k)."""
    c = np.asarray(centroids, dtype=np.float64)
    b = np.asarray(borders, dtype=INDEX_DTYPE)
    if b.shape[0] != c.shape[0] + 1:
        raise ValueError(f"{b.shape[0]} borders do not match {c.shape[0]} centroids")
    w, wd, wdd = cluster_sums(prefix, b)
    c = c - prefix.offset
    # empty clusters have all three sums exactly zero
    return float(np.sum(wdd - 2 * c * wd + c * c * w))


def update_centroids(data: SortedInput, prefix: PrefixSums, centroids: np.ndarray, borders: np.ndarray) -> np.ndarray:
    """Lloyd update step: each non-empty cluster moves to its (weighted) mean.

    Empty clusters keep their centroid. A non-empty cluster with zero total
    weight moves to the unweighted mean of its values.
    """
    w, wx, _ = cluster_sums(prefix, borders)
    positive = w > 0
    new = centroids.copy()
    lo, hi = borders[:-1][positive], borders[1:][positive]
    # same clamping as range_centroid
    new[positive] = np.clip(prefix.offset + wx[positive] / w[positive], data.values[lo], data.values[hi - 1])
    weightless = np.flatnonzero(~positive & (borders[1:] > borders[:-1]))
    for i in weightless:
        new[i] = data.values[borders[i]:borders[i + 1]].mean()
    return new


def lloyd_step(data: SortedInput, prefix: PrefixSums, centroids, span: Optional[IndexRange] = None):
    """One assignment + update step. Returns ``(new_centroids, borders)``."""
    c = np.asarray(centroids, dtype=np.float64)
    borders = centroids_to_borders(data, c, span)
    return update_centroids(data, prefix, c, borders), borders


def is_lloyd_fixed_point(data: SortedInput, prefix: PrefixSums, result: Clustering,
                         span: Optional[IndexRange] = None) -> bool:
    """True if one Lloyd step reproduces ``result``'s borders and centroids exactly."""
    centroids = np.asarray(result.centroids, dtype=np.float64)
    if np.any(centroids[1:] < centroids[:-1]):
        return False
    new_centroids, borders = lloyd_step(data, prefix, centroids, span)
    return bool(np.array_equal(borders, result.borders) and np.array_equal(new_centroids, centroids))
