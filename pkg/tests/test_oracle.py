import itertools

import numpy as np
import pytest

from logkmeans.kcluster import DegenerateWeightsError, KMeansConfig, RandomSource, kmeans_1d
from logkmeans.oracle import (
    exact_dp,
    exhaustive_two_cluster,
    naive_greedy_kmeanspp,
    naive_lloyd,
    nearest_centroid,
)

from conftest import prepare


def brute_force_partition(x, w, k):
    """Best contiguous partition by enumerating every set of k-1 cut points."""
    best = np.inf
    n = len(x)
    for cuts in itertools.combinations(range(1, n), k - 1):
        b = (0,) + cuts + (n,)
        total = 0.0
        for s, e in zip(b[:-1], b[1:]):
            c = np.sum(w[s:e] * x[s:e]) / w[s:e].sum()
            total += np.sum(w[s:e] * (x[s:e] - c) ** 2)
        best = min(best, total)
    return best


class TestNearestCentroid:
    def test_tie_goes_right(self):
        assert nearest_centroid(np.array([0.0, 2.0, 4.0]), np.array([1.0, 3.0])).tolist() == [0, 1, 1]

    def test_duplicate_centroids(self):
        labels = nearest_centroid(np.array([0.0, 1.0, 2.0]), np.array([1.0, 1.0]))
        assert labels.tolist() == [0, 1, 1]


class TestNaiveLloyd:
    def test_four_points(self):
        result = naive_lloyd([0, 1, 9, 10], None, [1, 9])
        assert result.centroids.tolist() == [0.5, 9.5]
        assert result.borders.tolist() == [0, 2, 4]
        assert result.wcss == 1.0

    def test_converged_input(self):
        result = naive_lloyd([0, 1, 9, 10], None, [0.5, 9.5])
        assert result.iterations == 1
        assert result.converged


class TestNaiveInit:
    def test_k1_is_weighted_draw(self):
        x, w = np.array([1.0, 2.0, 3.0]), np.array([0.0, 0.0, 1.0])
        assert naive_greedy_kmeanspp(x, w, KMeansConfig(1), RandomSource(0)).tolist() == [3.0]

    def test_identical_points(self):
        c = naive_greedy_kmeanspp(np.full(6, 4.0), None, KMeansConfig(4), RandomSource(2))
        assert c.tolist() == [4.0] * 4

    def test_zero_weight(self):
        with pytest.raises(DegenerateWeightsError):
            naive_greedy_kmeanspp(np.arange(3.0), np.zeros(3), KMeansConfig(2), RandomSource(0))


class TestExactDP:
    def test_four_points(self):
        result = exact_dp([0, 1, 9, 10], None, 2)
        assert result.wcss == pytest.approx(1.0)
        assert result.borders.tolist() == [0, 2, 4]
        assert result.method == "exact_dp"

    def test_k_equals_n(self):
        assert exact_dp([1, 4, 6], None, 3).wcss == 0

    def test_k1(self):
        x, w = np.array([1.0, 2.0, 6.0]), np.array([1.0, 2.0, 1.0])
        mean = np.sum(w * x) / w.sum()
        assert exact_dp(x, w, 1).wcss == pytest.approx(np.sum(w * (x - mean) ** 2))

    def test_k_too_large(self):
        with pytest.raises(ValueError):
            exact_dp([1.0], None, 2)

    def test_matches_brute_force(self, rng):
        for _ in range(40):
            n, k = int(rng.integers(2, 11)), int(rng.integers(1, 5))
            k = min(k, n)
            x = np.sort(rng.normal(size=n))
            w = rng.uniform(0.1, 2, n)
            assert exact_dp(x, w, k).wcss == pytest.approx(brute_force_partition(x, w, k), rel=1e-9, abs=1e-12)

    def test_lower_bounds_kmeans(self, rng):
        for seed in range(30):
            n, k = int(rng.integers(10, 256)), int(rng.integers(2, 9))
            data, p = prepare(rng.normal(size=n), rng.uniform(0.1, 2, n))
            fast = kmeans_1d(data, p, KMeansConfig(k, seed=seed))
            assert exact_dp(data.values, data.weights, k).wcss <= fast.wcss * (1 + 1e-9) + 1e-12

    def test_large_offset(self):
        x = 1e6 + np.array([0.0, 0.1, 0.2, 5.0, 5.1, 5.2])
        assert exact_dp(x, None, 2).wcss == pytest.approx(0.04, rel=1e-6)


class TestExhaustiveTwoCluster:
    def test_four_points(self):
        result = exhaustive_two_cluster([0, 1, 9, 10])
        assert result.borders.tolist() == [0, 2, 4]
        assert result.convergent == (2,)
        assert result.wcss == pytest.approx(1.0)

    def test_symmetric_bimodal(self):
        x = np.concatenate([np.linspace(-1, 1, 5) - 10, np.linspace(-1, 1, 5) + 10])
        assert 5 in exhaustive_two_cluster(x).convergent

    def test_degenerate_weights(self):
        with pytest.raises(DegenerateWeightsError):
            exhaustive_two_cluster([1.0, 2.0, 3.0], [0.0, 1.0, 0.0])
