import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logkmeans.oracle import nearest_centroid
from logkmeans.partition import (
    Clustering,
    centroids_to_borders,
    is_lloyd_fixed_point,
    lloyd_step,
    range_centroid,
    range_wcss,
    total_wcss,
    update_centroids,
)

from conftest import prepare_sorted


def direct_wcss(values, weights, centroids, borders):
    total = 0.0
    for i, c in enumerate(centroids):
        s, e = borders[i], borders[i + 1]
        total += float(np.sum(weights[s:e] * (values[s:e] - c) ** 2))
    return total


class TestCentroidsToBorders:
    def test_clean_split(self):
        data, _ = prepare_sorted([0, 1, 2, 3])
        assert centroids_to_borders(data, [0.5, 2.5]).tolist() == [0, 2, 4]

    def test_one_point_each(self):
        data, _ = prepare_sorted([0, 10])
        assert centroids_to_borders(data, [0, 10]).tolist() == [0, 1, 2]

    def test_midpoint_tie_goes_right(self):
        data, _ = prepare_sorted([0, 2, 4])
        borders = centroids_to_borders(data, [1, 3])
        assert borders.tolist() == [0, 1, 3]
        # same answer from the brute-force assignment
        labels = nearest_centroid(data.values, np.array([1.0, 3.0]))
        assert labels.tolist() == [0, 1, 1]

    def test_subrange(self):
        data, _ = prepare_sorted([0, 1, 2, 3, 4, 5])
        assert centroids_to_borders(data, [1.5, 3.5], (1, 5)).tolist() == [1, 3, 5]

    def test_duplicate_centroids_leave_empty_cluster(self):
        data, _ = prepare_sorted([0, 2, 3])
        borders = centroids_to_borders(data, [1.0, 1.0, 3.0])
        assert borders.tolist() == [0, 1, 1, 3]

    def test_unsorted_rejected(self):
        data, _ = prepare_sorted([0, 1])
        with pytest.raises(ValueError, match="sorted"):
            centroids_to_borders(data, [2.0, 1.0])

    @settings(max_examples=300)
    @given(st.integers(0, 2**32 - 1))
    def test_matches_brute_force_assignment(self, seed):
        rng = np.random.default_rng(seed)
        n, k = int(rng.integers(1, 257)), int(rng.integers(1, 17))
        # integer grids make midpoint ties common
        values = np.sort(rng.integers(-20, 20, n).astype(float))
        centroids = np.sort(rng.integers(-25, 25, k).astype(float))
        data, _ = prepare_sorted(values)
        borders = centroids_to_borders(data, centroids)
        labels = nearest_centroid(values, centroids)
        expected = np.concatenate(([0], np.cumsum(np.bincount(labels, minlength=k))))
        np.testing.assert_array_equal(borders, expected)


class TestRangeCentroid:
    def test_uniform_mean(self):
        data, p = prepare_sorted([1, 2, 3])
        assert range_centroid(p, data, (0, 3)) == 2

    def test_weighted_mean(self):
        data, p = prepare_sorted([1, 3], [3, 1])
        assert range_centroid(p, data, (0, 2)) == pytest.approx((3 * 1 + 1 * 3) / 4)

    def test_zero_weight_falls_back_to_plain_mean(self):
        data, p = prepare_sorted([4, 6], [0, 0])
        assert range_centroid(p, data, (0, 2)) == 5

    def test_empty_range_rejected(self):
        data, p = prepare_sorted([1, 2])
        with pytest.raises(ValueError):
            range_centroid(p, data, (1, 1))

    def test_constant_range_is_exact(self):
        # rounding in w*x/w must not leak out of [min, max]
        rng = np.random.default_rng(3)
        data, p = prepare_sorted(np.full(50, 0.1), rng.uniform(0.1, 3, 50))
        for s in range(0, 50, 7):
            assert range_centroid(p, data, (s, 50)) == 0.1


class TestWcss:
    def test_range_wcss_unit(self):
        _, p = prepare_sorted([1, 2, 3])
        assert range_wcss(p, 2.0, (0, 3)) == pytest.approx(2.0)

    def test_range_wcss_single_point(self):
        _, p = prepare_sorted([7.5])
        assert range_wcss(p, 7.5, (0, 1)) == 0.0

    def test_range_wcss_weighted(self):
        _, p = prepare_sorted([1, 3], [3, 1])
        assert range_wcss(p, 1.5, (0, 2)) == pytest.approx(3 * 0.25 + 2.25)

    def test_range_wcss_empty(self):
        _, p = prepare_sorted([1, 3])
        assert range_wcss(p, 1.0, (1, 1)) == 0.0

    def test_total_wcss_perfect_fit(self):
        _, p = prepare_sorted([1, 2, 5])
        assert total_wcss(p, [1, 2, 5], [0, 1, 2, 3]) == 0.0

    def test_total_wcss_four_points(self, four_points):
        _, p = four_points
        assert total_wcss(p, [0.5, 9.5], [0, 2, 4]) == pytest.approx(1.0)

    def test_total_wcss_single_cluster(self):
        _, p = prepare_sorted([1, 2, 3])
        assert total_wcss(p, [2.0], [0, 3]) == pytest.approx(2.0)

    def test_total_wcss_shape_mismatch(self):
        _, p = prepare_sorted([1, 2, 3])
        with pytest.raises(ValueError):
            total_wcss(p, [1.0, 2.0], [0, 3])

    def test_total_matches_direct_double_loop(self, rng):
        for _ in range(200):
            n, k = int(rng.integers(1, 200)), int(rng.integers(1, 10))
            values = np.sort(rng.normal(0, 10, n))
            weights = rng.uniform(0, 3, n)
            data, p = prepare_sorted(values, weights)
            centroids = np.sort(rng.normal(0, 10, k))
            borders = centroids_to_borders(data, centroids)
            want = direct_wcss(values, weights, centroids, borders)
            assert total_wcss(p, centroids, borders) == pytest.approx(want, rel=1e-8, abs=1e-9)

    def test_centroid_minimises_cluster_wcss(self, rng):
        for _ in range(100):
            n = int(rng.integers(2, 100))
            values = np.sort(rng.normal(0, 5, n))
            data, p = prepare_sorted(values, rng.uniform(0.1, 2, n))
            c = range_centroid(p, data, (0, n))
            delta = 1e-3 * (values[-1] - values[0])
            base = range_wcss(p, c, (0, n))
            for shifted in (c - delta, c + delta):
                assert range_wcss(p, shifted, (0, n)) > base - 1e-12


class TestLloydStep:
    def test_update_keeps_empty_cluster(self):
        data, p = prepare_sorted([0, 2, 3])
        centroids = np.array([1.0, 1.0, 3.0])
        borders = centroids_to_borders(data, centroids)
        assert borders.tolist() == [0, 1, 1, 3]
        new = update_centroids(data, p, centroids, borders)
        assert new.tolist() == [0.0, 1.0, 2.5]

    def test_update_zero_weight_cluster_plain_mean(self):
        data, p = prepare_sorted([0, 1, 8, 10], [1, 1, 0, 0])
        new = update_centroids(data, p, np.array([0.0, 9.0]), np.array([0, 2, 4]))
        assert new.tolist() == [0.5, 9.0]

    def test_fixed_point(self, four_points):
        data, p = four_points
        result = Clustering(np.array([0.5, 9.5]), np.array([0, 2, 4]), 1.0)
        assert is_lloyd_fixed_point(data, p, result)

    def test_not_fixed_point(self, four_points):
        data, p = four_points
        centroids, borders = lloyd_step(data, p, [1.0, 9.0])
        assert borders.tolist() == [0, 2, 4]
        assert centroids.tolist() == [0.5, 9.5]
        assert not is_lloyd_fixed_point(data, p, Clustering(np.array([1.0, 9.0]), borders, 2.0))
