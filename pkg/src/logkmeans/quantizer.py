"""Seed-and-upscale scalar quantization codebooks.

A ``b``-bit seed codebook comes from k-means with ``k = 2**b``; each upscale
step then splits every cluster in two with the two-cluster solver, reusing
the sort order and prefix sums computed once for the seed.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .core import INDEX_DTYPE, PrefixSums, SortedInput
from .kcluster import KMeansConfig, kmeans_1d
from .partition import total_wcss
from .two_cluster import split_range


@dataclass
class Codebook:
    bits: int
    centroids: np.ndarray
    borders: np.ndarray
    wcss: float
    provenance: str = "seed"

    @property
    def levels(self) -> int:
        return self.centroids.shape[0]

    def to_dict(self) -> dict:
        return {
            "bits": self.bits,
            "provenance": self.provenance,
            "wcss": float(self.wcss),
            "centroids": [float(c) for c in self.centroids],
            "borders": [int(b) for b in self.borders],
        }


def seed_codebook(data: SortedInput, prefix: PrefixSums, bits: int, seed: int = 0,
                  max_iter: int = 300, local_trials: Optional[int] = None) -> Codebook:
    """``2**bits``-level codebook from k-means over the whole channel."""
    k = 2 ** bits
    if bits < 0 or k > len(data):
        raise ValueError(f"{k} levels need at least {k} values, got {len(data)}")
    result = kmeans_1d(data, prefix, KMeansConfig(k, max_iter=max_iter, local_trials=local_trials, seed=seed))
    return Codebook(bits, result.centroids, result.borders, result.wcss, "seed")


def upscale(codebook: Codebook, data: SortedInput, prefix: PrefixSums) -> Codebook:
    """Double the number of levels by splitting every cluster in two.

    An empty parent cluster yields two empty children at the parent's
    centroid.
    """
    k = codebook.levels
    centroids = np.empty(2 * k, dtype=np.float64)
    borders = np.empty(2 * k + 1, dtype=INDEX_DTYPE)
    parent_borders = codebook.borders
    for i in range(k):
        start, stop = int(parent_borders[i]), int(parent_borders[i + 1])
        if start == stop:
            centroids[2 * i:2 * i + 2] = codebook.centroids[i]
            borders[2 * i:2 * i + 2] = start
            continue
        left, right, division, _, _ = split_range(data, prefix, start, stop)
        centroids[2 * i] = left
        centroids[2 * i + 1] = right
        borders[2 * i] = start
        borders[2 * i + 1] = division
    borders[-1] = parent_borders[-1]
    return Codebook(codebook.bits + 1, centroids, borders, total_wcss(prefix, centroids, borders),
                    f"upscaled-from-{codebook.bits}")


def assign_codes(values, codebook: Codebook, order: Optional[np.ndarray]) -> np.ndarray:
    """Code (cluster index) of every original value, in original order.

    ``order`` is the sort permutation (``sorted = original[order]``); pass
    None when the values were already sorted.
    """
    n = len(values)
    if int(codebook.borders[-1] - codebook.borders[0]) != n:
        raise ValueError("codebook does not cover the given values")
    sorted_codes = np.repeat(np.arange(codebook.levels, dtype=INDEX_DTYPE), np.diff(codebook.borders))
    if order is None:
        return sorted_codes
    codes = np.empty(n, dtype=INDEX_DTYPE)
    codes[order] = sorted_codes
    return codes


@dataclass
class LadderLevel:
    codebook: Codebook
    main_ns: int


@dataclass
class QuantizationLadder:
    levels: List[LadderLevel] = field(default_factory=list)

    @property
    def seed_ns(self) -> int:
        return self.levels[0].main_ns

    @property
    def upscale_ns(self) -> int:
        return sum(level.main_ns for level in self.levels[1:])


def quantize_ladder(data: SortedInput, prefix: PrefixSums, seed_bits: int, target_bits: int,
                    seed: int = 0, max_iter: int = 300) -> QuantizationLadder:
    """Seed at ``seed_bits`` and upscale one bit at a time up to ``target_bits``."""
    if seed_bits > target_bits:
        raise ValueError("seed_bits must not exceed target_bits")
    ladder = QuantizationLadder()
    t0 = time.perf_counter_ns()
    book = seed_codebook(data, prefix, seed_bits, seed=seed, max_iter=max_iter)
    ladder.levels.append(LadderLevel(book, time.perf_counter_ns() - t0))
    for _ in range(seed_bits, target_bits):
        t0 = time.perf_counter_ns()
        book = upscale(book, data, prefix)
        ladder.levels.append(LadderLevel(book, time.perf_counter_ns() - t0))
    return ladder
