"""Synthetic data generators for benchmarks and tests."""

from __future__ import annotations

import numpy as np

CHANNEL_SIZE = 14336


def uniform(n: int, seed: int = 0) -> np.ndarray:
    """``n`` uniform reals in [0, 1)."""
    return np.random.default_rng(seed).random(n)


def blobs(n: int, centers: int = 8, seed: int = 0, cluster_std: float = 1.0,
          center_box: tuple[float, float] = (-10.0, 10.0)) -> np.ndarray:
    """Gaussian mixture with ``centers`` equally likely components."""
    rng = np.random.default_rng(seed)
    means = rng.uniform(center_box[0], center_box[1], size=centers)
    labels = rng.integers(centers, size=n)
    return rng.normal(means[labels], cluster_std)


def synthetic_channel(n: int = CHANNEL_SIZE, seed: int = 0, weighted: bool = False):
    """Stand-in for one output channel of a linear layer.

    Returns ``(values, weights)``: standard-normal values and, if
    ``weighted``, positive importance weights; otherwise ``weights`` is None.
    """
    rng = np.random.default_rng(seed)
    values = rng.standard_normal(n)
    weights = rng.gamma(2.0, 0.5, size=n) if weighted else None
    return values, weights


GENERATORS = {
    "uniform": lambda n, k, seed: uniform(n, seed),
    "blobs": lambda n, k, seed: blobs(n, centers=max(k, 1), seed=seed, center_box=(-100.0, 100.0)),
}
