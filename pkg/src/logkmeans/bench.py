"""Timing harness: preprocessing and main-stage medians per (method, n, k).

All measurements run on the calling thread. ``fast`` is the prefix-sum
pipeline (the two-cluster solver when k is 2), ``naive`` the O(nk) oracle
pipeline, which only needs the values sorted.
"""

from __future__ import annotations

import re
import statistics
import time
from dataclasses import astuple, dataclass
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from . import core, kcluster, oracle
from .datasets import GENERATORS
from .two_cluster import two_cluster

CSV_HEADER = "method,n,k,seed,preprocess_ns,main_ns,wcss,iterations"
METHODS = ("fast", "naive")


@dataclass
class BenchRow:
    method: str
    n: int
    k: int
    seed: int
    preprocess_ns: int
    main_ns: int
    wcss: float
    iterations: int

    def csv(self) -> str:
        return ",".join(repr(v) if isinstance(v, float) else str(v) for v in astuple(self))


def _int(token: str) -> int:
    token = token.strip()
    if "^" in token:
        base, exp = token.split("^")
        return int(base) ** int(exp)
    return int(token)


def parse_grid(spec: str) -> Dict[str, List[int]]:
    """Parse ``"n=65536,2^20;k=2,16"`` into ``{"n": [...], "k": [...]}``."""
    grid = {}
    for part in filter(None, (p.strip() for p in spec.split(";"))):
        match = re.fullmatch(r"(\w+)\s*=\s*(.+)", part)
        if not match:
            raise ValueError(f"bad grid component {part!r}")
        grid[match.group(1)] = [_int(t) for t in match.group(2).split(",")]
    if set(grid) != {"n", "k"}:
        raise ValueError("grid must define exactly n and k")
    return grid


def time_run(method: str, values: np.ndarray, k: int, seed: int) -> Tuple[int, int, object]:
    """One timed run; returns ``(preprocess_ns, main_ns, clustering)``."""
    if method == "fast":
        t0 = time.perf_counter_ns()
        data = core.sort_and_align(values)
        prefix = core.build_prefix_sums(data)
        t1 = time.perf_counter_ns()
        if k == 2:
            result = two_cluster(data, prefix)
        else:
            result = kcluster.kmeans_1d(data, prefix, kcluster.KMeansConfig(k, seed=seed))
        t2 = time.perf_counter_ns()
    elif method == "naive":
        t0 = time.perf_counter_ns()
        x = np.sort(values)
        t1 = time.perf_counter_ns()
        result = oracle.naive_kmeans(x, None, kcluster.KMeansConfig(k, seed=seed))
        t2 = time.perf_counter_ns()
    else:
        raise ValueError(f"unknown method {method!r}")
    return t1 - t0, t2 - t1, result


def bench_point(method: str, values: np.ndarray, k: int, seed: int, reps: int = 5) -> BenchRow:
    """Median preprocessing and main-stage time over ``reps`` runs."""
    pre, main = [], []
    result = None
    for _ in range(reps):
        p, m, result = time_run(method, values, k, seed)
        pre.append(p)
        main.append(m)
    return BenchRow(method, len(values), k, seed, int(statistics.median(pre)), int(statistics.median(main)),
                    float(result.wcss), int(result.iterations))


def warm_up() -> None:
    """Trigger JIT compilation so it does not land in the first measurement."""
    values = np.array([0.0, 1.0, 9.0, 10.0])
    for method in METHODS:
        time_run(method, values, 2, 0)


def run_bench(grid: Dict[str, Sequence[int]], reps: int = 5, seed: int = 0, data: str = "blobs",
              methods: Sequence[str] = METHODS) -> Iterator[BenchRow]:
    if data not in GENERATORS:
        raise ValueError(f"unknown data family {data!r}")
    warm_up()
    for n in grid["n"]:
        for k in grid["k"]:
            values = GENERATORS[data](n, k, seed)
            for method in methods:
                yield bench_point(method, values, k, seed, reps)
