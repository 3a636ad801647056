"""Greedy k-means++ seeding and Lloyd iterations on sorted data.

Both stages work purely from prefix sums and binary searches, so once the
data is sorted and the prefix sums are built, seeding costs
O(l * k^2 * log n) and each Lloyd iteration O(k log n).

Random draws follow a fixed order so that other implementations can
replay them: one uniform for the first centroid, then for each further
centroid one batch of ``local_trials`` uniforms drawn before any search.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .core import INDEX_DTYPE, IndexRange, PrefixSums, SortedInput
from .partition import Clustering, centroids_to_borders, total_wcss, update_centroids


# Candidate WCSS values closer than this fraction of sum(w * (x - m)^2), m the
# median value, count as a tie. Symmetric candidates tie exactly in exact arithmetic, and prefix-sum
# rounding would otherwise pick between them at random.
TIE_RTOL = 1e-11


class DegenerateWeightsError(ValueError):
    """The range carries no weight, so weighted sampling is undefined."""


def default_local_trials(k: int) -> int:
    return max(1, 2 + int(math.log(k)))


@dataclass
class KMeansConfig:
    k: int
    max_iter: int = 300
    local_trials: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.local_trials is None:
            self.local_trials = default_local_trials(self.k)
        if self.local_trials < 1:
            raise ValueError("local_trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


class RandomSource:
    """Deterministic uniform [0, 1) stream backed by numpy's PCG64."""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(seed))
        self.draws = 0

    def uniform(self) -> float:
        self.draws += 1
        return float(self._gen.random())

    def uniforms(self, count: int) -> np.ndarray:
        self.draws += count
        return self._gen.random(count)


def _span(data: SortedInput, span) -> IndexRange:
    if span is None:
        return data.full_range
    return IndexRange(*span).check(len(data))


def sample_first_centroid(data: SortedInput, prefix: PrefixSums, span: Optional[IndexRange],
                          rng: RandomSource) -> float:
    """Draw one point with probability proportional to its weight, O(log n)."""
    start, stop = _span(data, span)
    cw = prefix.cum_weight
    total = cw[stop] - cw[start]
    if stop <= start or total <= 0:
        raise DegenerateWeightsError("degenerate weights: range has no weight to sample from")
    r = rng.uniform() * total
    # first index whose cumulative weight exceeds r; zero-weight points are never drawn
    j = int(np.searchsorted(cw[start + 1:stop + 1], r + cw[start], side="right")) + start
    return float(data.values[min(j, stop - 1)])


def cumulative_inertia(centroids, borders, prefix: PrefixSums, upto: int) -> float:
    """WCSS of the points before index ``upto`` under the given clustering, O(k).

    This is the cumulative sum of weighted squared distances to the nearest
    centroid, evaluated without ever materialising it.
    """
    total = 0.0
    cw, cwx, cwxx = prefix.cum_weight, prefix.cum_weighted_value, prefix.cum_weighted_square
    offset = prefix.offset
    for i in range(len(centroids)):
        start, end = int(borders[i]), int(borders[i + 1])
        if start >= upto:
            break
        end = min(end, upto)
        if start == end:
            continue
        c = float(centroids[i]) - offset
        total += (cwxx[end] - cwxx[start]) - 2 * c * (cwx[end] - cwx[start]) + c * c * (cw[end] - cw[start])
    return float(total)


class _InertiaQuery:
    """Cumulative inertia with per-cluster totals cached, O(log k) per query.

    Sums are accumulated in the same order as :func:`cumulative_inertia`, so
    results agree bit for bit.
    """

    def __init__(self, centroids: np.ndarray, borders: np.ndarray, prefix: PrefixSums):
        self.prefix = prefix
        self.centroids = [float(c) - prefix.offset for c in centroids]
        self.starts = [int(b) for b in borders[:-1]]
        self.ends = [int(b) for b in borders[1:]]
        self.before = [0.0]
        acc = 0.0
        for c, s, e in zip(self.centroids, self.starts, self.ends):
            if s != e:
                acc += self._cluster(c, s, e)
            self.before.append(acc)

    def _cluster(self, c: float, s: int, e: int) -> float:
        # c is already relative to the offset
        p = self.prefix
        return float((p.cum_weighted_square[e] - p.cum_weighted_square[s])
                     - 2 * c * (p.cum_weighted_value[e] - p.cum_weighted_value[s])
                     + c * c * (p.cum_weight[e] - p.cum_weight[s]))

    def __call__(self, upto: int) -> float:
        i = bisect.bisect_right(self.ends, upto)
        total = self.before[i]
        if i < len(self.ends) and self.starts[i] < upto:
            total += self._cluster(self.centroids[i], self.starts[i], upto)
        return total


def sample_candidates(data: SortedInput, prefix: PrefixSums, centroids, count: int,
                      span: Optional[IndexRange], rng: RandomSource):
    """Draw ``count`` points with probability proportional to w * D^2.

    D is the distance to the nearest current centroid. Returns
    ``(candidates, degenerate)``; when every point already coincides with a
    centroid the total inertia is zero (up to the greedy tie tolerance),
    and ``count`` copies of the first value in the range come back flagged
    as degenerate.
    """
    start, stop = _span(data, span)
    current = np.sort(np.asarray(centroids, dtype=np.float64))
    borders = centroids_to_borders(data, current, (start, stop))
    query = _InertiaQuery(current, borders, prefix)
    total = query(stop)
    selectors = rng.uniforms(count) * total
    # residue at rounding level means every point already sits on a centroid
    if not total > TIE_RTOL * prefix.spread(start, stop):
        return np.full(count, data.values[start], dtype=np.float64), True

    out = np.empty(count, dtype=np.float64)
    for t, r in enumerate(selectors):
        floor, ceiling = start + 1, stop
        # smallest j with S[j] > r; the point drawn is values[j - 1]
        while floor < ceiling:
            mid = (floor + ceiling) // 2
            if query(mid) <= r:
                floor = mid + 1
            else:
                ceiling = mid
        out[t] = data.values[floor - 1]
    return out, False


def greedy_kmeanspp(data: SortedInput, prefix: PrefixSums, config: KMeansConfig,
                    span: Optional[IndexRange], rng: RandomSource) -> np.ndarray:
    """Greedy k-means++ seeding; returns centroids in the order they were chosen.

    Each round samples ``config.local_trials`` candidates and keeps the one
    giving the lowest total WCSS. The first candidate evaluated wins ties,
    where WCSS values within ``TIE_RTOL * sum(w * (x - offset)^2)`` count as
    tied.
    """
    span = _span(data, span)
    k = config.k
    if k > span.size:
        raise ValueError(f"k={k} exceeds the {span.size} points in range")
    centroids = np.empty(k, dtype=np.float64)
    centroids[0] = sample_first_centroid(data, prefix, span, rng)
    tie = TIE_RTOL * prefix.spread(span.start, span.stop)

    for c_id in range(1, k):
        candidates, _ = sample_candidates(data, prefix, centroids[:c_id], config.local_trials, span, rng)
        best_inertia = math.inf
        best = candidates[0]
        for candidate in candidates:
            centroids[c_id] = candidate
            trial = np.sort(centroids[:c_id + 1])
            inertia = total_wcss(prefix, trial, centroids_to_borders(data, trial, span))
            if inertia < best_inertia - tie:
                best_inertia = inertia
                best = candidate
        centroids[c_id] = best
    return centroids


def lloyd(data: SortedInput, prefix: PrefixSums, initial_centroids, max_iter: int = 300,
          span: Optional[IndexRange] = None, trace: Optional[List[float]] = None) -> Clustering:
    """Lloyd iterations driven by border binary searches, O(k log n) each.

    Stops when an assignment step reproduces the previous borders exactly
    or after ``max_iter`` updates. If ``trace`` is given, the WCSS after
    every update is appended to it.
    """
    span = _span(data, span)
    centroids = np.sort(np.asarray(initial_centroids, dtype=np.float64))
    borders = None
    converged = False
    iterations = 0
    for _ in range(max_iter):
        new_borders = centroids_to_borders(data, centroids, span)
        if borders is not None and np.array_equal(new_borders, borders):
            converged = True
            break
        borders = new_borders
        # sorting only guards against ulp-level inversions between touching clusters
        centroids = np.sort(update_centroids(data, prefix, centroids, borders))
        iterations += 1
        if trace is not None:
            trace.append(total_wcss(prefix, centroids, borders))
    return Clustering(centroids, borders, total_wcss(prefix, centroids, borders), iterations, converged)


def kmeans_1d(data: SortedInput, prefix: PrefixSums, config: KMeansConfig,
              span: Optional[IndexRange] = None) -> Clustering:
    """Greedy k-means++ seeding followed by Lloyd iterations over ``span``."""
    span = _span(data, span)
    if config.k > span.size:
        raise ValueError(f"k={config.k} exceeds the {span.size} points in range")
    if config.k == span.size:
        return Clustering(
            data.values[span.start:span.stop].copy(),
            np.arange(span.start, span.stop + 1, dtype=INDEX_DTYPE),
            0.0,
        )
    rng = RandomSource(config.seed)
    init = greedy_kmeanspp(data, prefix, config, span, rng)
    return lloyd(data, prefix, init, config.max_iter, span)
