"""Slow reference implementations for testing and benchmarking.

Nothing here uses prefix sums or border searches; every quantity is
computed directly from the points, so these serve as independent checks on
the fast paths.

* :func:`naive_lloyd` and :func:`naive_greedy_kmeanspp`: textbook O(nk)
  versions using the same tie, empty-cluster and random-draw conventions as
  the fast code, so results can be compared exactly.
* :func:`exact_dp`: globally optimal contiguous k-partition via the
  O(k n^2) dynamic program.
* :func:`exhaustive_two_cluster`: scans every two-cluster division.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numba
import numpy as np

from .core import INDEX_DTYPE
from .kcluster import TIE_RTOL, DegenerateWeightsError, KMeansConfig, RandomSource
from .partition import Clustering


@dataclass
class OracleResult(Clustering):
    method: str = ""
    convergent: Tuple[int, ...] = ()


def _as_arrays(values, weights):
    x = np.asarray(values, dtype=np.float64)
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64)
    return x, w


def _direct_wcss(x, w, centroids, labels) -> float:
    return float(np.sum(w * (x - centroids[labels]) ** 2))


def nearest_centroid(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    """Index of the nearest centroid for every point, O(nk).

    ``centroids`` must be sorted. On a distance tie the higher index wins,
    except among duplicate centroids, where a point left of the shared value
    stays with the lowest index of the group. This is the same as splitting
    at centroid midpoints with points on a midpoint going right.
    """
    best = np.zeros(x.shape[0], dtype=INDEX_DTYPE)
    best_dist = np.abs(x - centroids[0])
    dist = np.empty_like(best_dist)
    take = np.empty(x.shape[0], dtype=bool)
    tie = np.empty(x.shape[0], dtype=bool)
    for i in range(1, centroids.shape[0]):
        c = centroids[i]
        np.abs(np.subtract(x, c, out=dist), out=dist)
        np.less(dist, best_dist, out=take)
        np.equal(dist, best_dist, out=tie)
        if tie.any():
            take |= tie & ((centroids[best] != c) | (x >= c))
        np.copyto(best, i, where=take)
        np.copyto(best_dist, dist, where=take)
    return best


def _labels_to_borders(labels: np.ndarray, k: int) -> np.ndarray:
    borders = np.zeros(k + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(labels, minlength=k), out=borders[1:])
    return borders


def naive_lloyd(values, weights, initial_centroids, max_iter: int = 300) -> Clustering:
    """Textbook Lloyd iterations over sorted ``values``.

    Stops when the assignment no longer changes. Empty clusters keep their
    centroid; a cluster with zero total weight moves to its plain mean.
    Weighted means are clamped to the cluster's value range.
    """
    x, w = _as_arrays(values, weights)
    centroids = np.sort(np.asarray(initial_centroids, dtype=np.float64))
    k = centroids.shape[0]
    labels = None
    converged = False
    iterations = 0
    for _ in range(max_iter):
        new_labels = nearest_centroid(x, centroids)
        if labels is not None and np.array_equal(new_labels, labels):
            converged = True
            break
        labels = new_labels
        counts = np.bincount(labels, minlength=k)
        wsum = np.bincount(labels, weights=w, minlength=k)
        wxsum = np.bincount(labels, weights=w * x, minlength=k)
        xsum = np.bincount(labels, weights=x, minlength=k)
        lo = np.full(k, np.inf)
        hi = np.full(k, -np.inf)
        np.minimum.at(lo, labels, x)
        np.maximum.at(hi, labels, x)
        new = centroids.copy()
        for i in range(k):
            if wsum[i] > 0:
                # a mean cannot leave the cluster's hull; clamp away rounding
                new[i] = min(max(wxsum[i] / wsum[i], lo[i]), hi[i])
            elif counts[i] > 0:
                new[i] = xsum[i] / counts[i]
        centroids = np.sort(new)
        iterations += 1
    return Clustering(centroids, _labels_to_borders(labels, k), _direct_wcss(x, w, centroids, labels),
                      iterations, converged)


def naive_greedy_kmeanspp(values, weights, config: KMeansConfig, rng: RandomSource) -> np.ndarray:
    """Greedy k-means++ with an explicit squared-distance array, O(l k n) overall.

    Consumes uniforms in the same order as the fast seeding: one draw for
    the first centroid, then one batch of ``local_trials`` per round.
    """
    x, w = _as_arrays(values, weights)
    n = x.shape[0]
    cum = np.cumsum(w)
    if not cum[-1] > 0:
        raise DegenerateWeightsError("degenerate weights: no positive weight")
    centroids = np.empty(config.k, dtype=np.float64)
    first = int(np.searchsorted(cum, rng.uniform() * cum[-1], side="right"))
    centroids[0] = x[min(first, n - 1)]
    closest = w * (x - centroids[0]) ** 2
    # tolerance scale: spread about the middle element
    tie = TIE_RTOL * float(np.sum(w * (x - x[n // 2]) ** 2))

    for c_id in range(1, config.k):
        selectors = rng.uniforms(config.local_trials)
        cum = np.cumsum(closest)
        if cum[-1] > tie:
            picks = np.minimum(np.searchsorted(cum, selectors * cum[-1], side="right"), n - 1)
            candidates = x[picks]
        else:
            candidates = np.full(config.local_trials, x[0])
        best_inertia = np.inf
        best, best_closest = candidates[0], closest
        for candidate in candidates:
            trial = np.minimum(closest, w * (x - candidate) ** 2)
            inertia = trial.sum()
            if inertia < best_inertia - tie:
                best_inertia, best, best_closest = inertia, candidate, trial
        centroids[c_id] = best
        closest = best_closest
    return centroids


def naive_kmeans(values, weights, config: KMeansConfig) -> Clustering:
    """Naive seeding + naive Lloyd, the baseline for speed comparisons."""
    rng = RandomSource(config.seed)
    init = naive_greedy_kmeanspp(values, weights, config, rng)
    return naive_lloyd(values, weights, init, config.max_iter)


@numba.njit(cache=True)
def _dp_tables(cw, cwx, cwxx, k):
    n = cw.shape[0] - 1
    cost = np.full((k + 1, n + 1), np.inf)
    split = np.zeros((k + 1, n + 1), dtype=np.int64)
    cost[0, 0] = 0.0
    for m in range(1, k + 1):
        for j in range(m, n - (k - m) + 1):
            best = np.inf
            best_s = m - 1
            for s in range(m - 1, j):
                prev = cost[m - 1, s]
                if prev == np.inf:
                    continue
                wsum = cw[j] - cw[s]
                c = 0.0
                if wsum > 0:
                    wx = cwx[j] - cwx[s]
                    c = (cwxx[j] - cwxx[s]) - wx * wx / wsum
                    if c < 0.0:
                        c = 0.0
                total = prev + c
                if total < best:
                    best = total
                    best_s = s
            cost[m, j] = best
            split[m, j] = best_s
    return cost, split


def exact_dp(values, weights, k: int) -> OracleResult:
    """Globally optimal partition of sorted ``values`` into ``k`` contiguous clusters.

    Uses the classic O(k n^2) recurrence over the last cluster's start.
    The reported WCSS is re-summed directly from the optimal borders.
    """
    x, w = _as_arrays(values, weights)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    # centre on the mean so the variance algebra does not cancel away
    d = x - x.mean()
    cw = np.concatenate(([0.0], np.cumsum(w)))
    cwx = np.concatenate(([0.0], np.cumsum(w * d)))
    cwxx = np.concatenate(([0.0], np.cumsum(w * d * d)))
    _, split = _dp_tables(cw, cwx, cwxx, k)

    borders = np.empty(k + 1, dtype=INDEX_DTYPE)
    borders[k] = n
    for m in range(k, 0, -1):
        borders[m - 1] = split[m, borders[m]]
    centroids = np.empty(k, dtype=np.float64)
    wcss = 0.0
    for i in range(k):
        xs, ws = x[borders[i]:borders[i + 1]], w[borders[i]:borders[i + 1]]
        centroids[i] = np.sum(ws * xs) / ws.sum() if ws.sum() > 0 else xs.mean()
        wcss += float(np.sum(ws * (xs - centroids[i]) ** 2))
    return OracleResult(centroids, borders, wcss, method="exact_dp")


def exhaustive_two_cluster(values, weights=None) -> OracleResult:
    """Try every division of sorted ``values`` into two non-empty clusters.

    Returns the WCSS-minimal division and, in ``convergent``, every division
    that is a Lloyd fixed point (both sides weighted, and the centroid
    midpoint lies in ``(values[d-1], values[d]]``).
    """
    x, w = _as_arrays(values, weights)
    n = x.shape[0]
    if n < 2 or np.count_nonzero(w > 0) < 2:
        raise DegenerateWeightsError("degenerate weights: need two or more weighted points")
    best = None
    convergent = []
    for d in range(1, n):
        lw, rw = w[:d].sum(), w[d:].sum()
        left = np.sum(w[:d] * x[:d]) / lw if lw > 0 else x[:d].mean()
        right = np.sum(w[d:] * x[d:]) / rw if rw > 0 else x[d:].mean()
        wcss = float(np.sum(w[:d] * (x[:d] - left) ** 2) + np.sum(w[d:] * (x[d:] - right) ** 2))
        if best is None or wcss < best[0]:
            best = (wcss, d, left, right)
        midpoint = (left + right) / 2
        if lw > 0 and rw > 0 and x[d - 1] < midpoint <= x[d]:
            convergent.append(d)
    wcss, d, left, right = best
    return OracleResult(np.array([left, right]), np.array([0, d, n], dtype=INDEX_DTYPE), wcss,
                        method="exhaustive_two_cluster", convergent=tuple(convergent))
