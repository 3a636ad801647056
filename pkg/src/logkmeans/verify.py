"""Randomized equivalence suites comparing the fast paths with the oracles.

Every case is generated from its own integer seed, so a failure can be
replayed with ``run_case(suite, seed)``. Library functions are looked up
through their modules at call time, which lets tests swap in a broken
implementation and check that the suites notice.
"""

from __future__ import annotations

import importlib
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import core, kcluster, oracle, partition

two = importlib.import_module(".two_cluster", __package__)

VALUE_REGIMES = ("distinct", "duplicates", "constant", "multimodal")
WEIGHT_REGIMES = ("ones", "positive", "sparse", "single")


def random_values(rng: np.random.Generator, n: int, regime: str) -> np.ndarray:
    if regime == "distinct":
        return rng.standard_normal(n) * rng.uniform(0.1, 100.0)
    if regime == "duplicates":
        # small integers: many exact ties and exactly representable means
        return rng.integers(0, max(2, n // 8), n).astype(np.float64)
    if regime == "constant":
        return np.full(n, rng.standard_normal())
    if regime == "multimodal":
        groups = int(rng.integers(2, 7))
        centers = np.cumsum(rng.uniform(1.0, 20.0, groups))
        sizes = rng.multinomial(n, rng.dirichlet(np.ones(groups)))
        return np.concatenate([rng.normal(c, 0.2, s) for c, s in zip(centers, sizes)])
    raise ValueError(f"unknown value regime {regime!r}")


def random_weights(rng: np.random.Generator, n: int, regime: str) -> np.ndarray:
    if regime == "ones":
        return np.ones(n)
    if regime == "positive":
        return rng.uniform(0.01, 5.0, n)
    if regime == "sparse":
        return rng.uniform(0.0, 5.0, n) * (rng.random(n) < 0.3)
    if regime == "single":
        w = np.zeros(n)
        w[rng.integers(n)] = rng.uniform(0.5, 3.0)
        return w
    raise ValueError(f"unknown weight regime {regime!r}")


def two_cluster_instance(seed: int, max_n: int = 512):
    """Random input covering every value and weight regime, cycled by seed."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    vr = VALUE_REGIMES[seed % len(VALUE_REGIMES)]
    wr = WEIGHT_REGIMES[(seed // len(VALUE_REGIMES)) % len(WEIGHT_REGIMES)]
    return random_values(rng, n, vr), random_weights(rng, n, wr)


def kmeans_instance(seed: int, max_n: int = 512, ks=(2, 3, 8, 16)):
    """Random positive-weight input plus a k; returns ``(values, weights, k)``."""
    rng = np.random.default_rng(seed)
    k = ks[seed % len(ks)]
    n = int(rng.integers(max(k + 1, 20), max_n + 1))
    regime = ("distinct", "duplicates", "multimodal")[(seed // len(ks)) % 3]
    x = random_values(rng, n, regime)
    w = np.ones(n) if seed % 2 == 0 else rng.uniform(0.1, 3.0, n)
    return x, w, k


def _prepare(x, w):
    data = core.sort_and_align(x, w)
    return data, core.build_prefix_sums(data)


def probe_bound(n: int) -> int:
    return math.ceil(math.log2(n)) + 2 if n > 1 else 2


def check_two_cluster(seed: int) -> Optional[str]:
    data, prefix = _prepare(*two_cluster_instance(seed))
    result = two.two_cluster(data, prefix)
    n = len(data)
    if result.iterations > probe_bound(n):
        return f"{result.iterations} probes for n={n}"
    if result.degenerate:
        c = result.centroids
        if c[0] != c[1]:
            return "degenerate output with distinct centroids"
        return None
    if not partition.is_lloyd_fixed_point(data, prefix, result):
        return f"not a Lloyd fixed point (division {result.borders[1]}, n={n})"
    return None


def check_init(seed: int) -> Optional[str]:
    x, w, k = kmeans_instance(seed)
    data, prefix = _prepare(x, w)
    config = kcluster.KMeansConfig(k, seed=seed)
    fast = kcluster.greedy_kmeanspp(data, prefix, config, None, kcluster.RandomSource(seed))
    slow = oracle.naive_greedy_kmeanspp(data.values, data.weights, config, kcluster.RandomSource(seed))
    if not np.array_equal(fast, slow):
        first = int(np.flatnonzero(fast != slow)[0])
        return f"centroid {first} differs: {fast[first]!r} vs {slow[first]!r} (k={k}, n={len(data)})"
    return None


def check_lloyd(seed: int) -> Optional[str]:
    x, w, k = kmeans_instance(seed)
    data, prefix = _prepare(x, w)
    rng = np.random.default_rng(seed)
    init = rng.choice(data.values, size=k, replace=False)
    trace: List[float] = []
    fast = kcluster.lloyd(data, prefix, init, 300, None, trace)
    slow = oracle.naive_lloyd(data.values, data.weights, init, 300)
    if not np.array_equal(fast.borders, slow.borders):
        return f"borders differ (k={k}, n={len(data)})"
    if not np.allclose(fast.centroids, slow.centroids, rtol=1e-9, atol=0.0):
        return f"centroids differ beyond rtol 1e-9 (k={k}, n={len(data)})"
    for i in range(1, len(trace)):
        if trace[i] > trace[i - 1] + 1e-9 * abs(trace[i - 1]):
            return f"WCSS increased at update {i}: {trace[i - 1]!r} -> {trace[i]!r}"
    return None


def check_dp_bound(seed: int) -> Optional[str]:
    x, w, k = kmeans_instance(seed, max_n=256)
    data, prefix = _prepare(x, w)
    fast = kcluster.kmeans_1d(data, prefix, kcluster.KMeansConfig(k, seed=seed))
    exact = oracle.exact_dp(data.values, data.weights, k)
    if exact.wcss > fast.wcss + 1e-9 * max(abs(fast.wcss), 1.0):
        return f"DP WCSS {exact.wcss!r} above k-means WCSS {fast.wcss!r} (k={k})"
    return None


SUITES: Dict[str, Callable[[int], Optional[str]]] = {
    "init": check_init,
    "lloyd": check_lloyd,
    "two-cluster": check_two_cluster,
    "dp-bound": check_dp_bound,
}

DEFAULT_CASES = {"init": 200, "lloyd": 200, "two-cluster": 10000, "dp-bound": 100}


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: List[Tuple[int, str]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        ok = self.cases - len(self.failures)
        line = f"{self.name}: {ok}/{self.cases} passed in {self.seconds:.1f}s"
        if self.failures:
            seeds = ", ".join(str(s) for s, _ in self.failures[:10])
            line += f"; failing seeds: {seeds}\n  first failure (seed {self.failures[0][0]}): {self.failures[0][1]}"
        return line


def run_case(suite: str, seed: int) -> Optional[str]:
    try:
        return SUITES[suite](seed)
    except Exception as exc:  # a crash is a failure of that case, not of the run
        return f"{type(exc).__name__}: {exc}"


def run_suite(suite: str, cases: Optional[int] = None, first_seed: int = 0) -> SuiteResult:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    cases = DEFAULT_CASES[suite] if cases is None else cases
    result = SuiteResult(suite, cases)
    t0 = time.perf_counter()
    for seed in range(first_seed, first_seed + cases):
        message = run_case(suite, seed)
        if message is not None:
            result.failures.append((seed, message))
    result.seconds = time.perf_counter() - t0
    return result
