"""Command-line interface: ``logkmeans {cluster,verify,bench,quantize}``.

Exit codes: 0 on success, 1 on invalid input or a failed check, 2 when the
input cannot be read.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import List, Optional, Tuple

import numpy as np

from . import __version__, bench, verify
from .core import InvalidInputError, SortedInput, build_prefix_sums, sort_and_align
from .datasets import CHANNEL_SIZE, synthetic_channel
from .kcluster import KMeansConfig, kmeans_1d
from .quantizer import quantize_ladder
from .two_cluster import two_cluster, warm_up

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


def _read_text(path: str, weighted: bool) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    stream = sys.stdin if path == "-" else open(path, encoding="utf-8")
    values: List[float] = []
    weights: List[float] = []
    expected = 2 if weighted else 1
    with stream:
        for lineno, line in enumerate(stream, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = [f.strip() for f in line.split(",")]
            if len(fields) != expected:
                raise CliError(f"line {lineno}: expected {expected} field(s), got {len(fields)}")
            try:
                values.append(float(fields[0]))
                if weighted:
                    weights.append(float(fields[1]))
            except ValueError:
                raise CliError(f"line {lineno}: not a number: {line!r}") from None
    return np.array(values), (np.array(weights) if weighted else None)


def read_input(path: str, fmt: str, weighted: bool) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """Load values (and weights) from a text or raw little-endian float64 file."""
    try:
        if fmt == "raw":
            if weighted:
                raise CliError("--weights is not supported with --format raw")
            if path == "-":
                return np.frombuffer(sys.stdin.buffer.read(), dtype="<f8").astype(np.float64), None
            raw = open(path, "rb").read()
            if len(raw) % 8:
                raise CliError(f"raw input length {len(raw)} is not a multiple of 8 bytes")
            return np.frombuffer(raw, dtype="<f8").astype(np.float64), None
        return _read_text(path, weighted)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}", EXIT_IO) from None
    except UnicodeDecodeError as exc:
        raise CliError(f"cannot decode {path}: {exc}", EXIT_IO) from None


def _prepare(values, weights, assume_sorted: bool) -> Tuple[SortedInput, object, int]:
    t0 = time.perf_counter_ns()
    data = SortedInput.from_sorted(values, weights) if assume_sorted else sort_and_align(values, weights)
    prefix = build_prefix_sums(data)
    return data, prefix, time.perf_counter_ns() - t0


def cmd_cluster(args) -> int:
    values, weights = read_input(args.input, args.format, args.weights)
    data, prefix, preprocess_ns = _prepare(values, weights, args.assume_sorted)
    if not 1 <= args.k <= len(data):
        raise CliError(f"--k {args.k} out of range for {len(data)} values")
    fast = args.k == 2 and args.fast_two_cluster
    if fast:
        warm_up()
    t0 = time.perf_counter_ns()
    if fast:
        result = two_cluster(data, prefix)
    else:
        config = KMeansConfig(args.k, max_iter=args.max_iter, local_trials=args.local_trials, seed=args.seed)
        result = kmeans_1d(data, prefix, config)
    main_ns = time.perf_counter_ns() - t0
    report = {
        "method": "two_cluster" if fast else "kmeans_1d",
        "n": len(data),
        "k": args.k,
        "seed": args.seed,
        "preprocess_ns": preprocess_ns,
        "main_ns": main_ns,
        "wcss": float(result.wcss),
        "iterations": int(result.iterations),
        "centroids": [float(c) for c in result.centroids],
        "borders": [int(b) for b in result.borders],
    }
    print(json.dumps(report))
    return EXIT_OK


def cmd_verify(args) -> int:
    suites = args.suite or list(verify.SUITES)
    ok = True
    for name in suites:
        result = verify.run_suite(name, args.cases)
        print(result.summary())
        ok &= result.passed
    print("all suites passed" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_bench(args) -> int:
    grid = bench.parse_grid(args.grid)
    methods = bench.METHODS if args.method == "both" else (args.method,)
    print(bench.CSV_HEADER)
    for row in bench.run_bench(grid, reps=args.reps, seed=args.seed, data=args.data, methods=methods):
        print(row.csv(), flush=True)
    return EXIT_OK


def cmd_quantize(args) -> int:
    if args.input is None:
        values, weights = synthetic_channel(args.n, seed=args.seed, weighted=args.weights)
    else:
        values, weights = read_input(args.input, args.format, args.weights)
    if args.seed_bits < 0 or args.seed_bits > args.target_bits:
        raise CliError("need 0 <= --seed-bits <= --target-bits")
    data, prefix, preprocess_ns = _prepare(values, weights, args.assume_sorted)
    if 2 ** args.seed_bits > len(data):
        raise CliError(f"--seed-bits {args.seed_bits} needs at least {2 ** args.seed_bits} values, got {len(data)}")
    warm_up()
    ladder = quantize_ladder(data, prefix, args.seed_bits, args.target_bits, seed=args.seed,
                             max_iter=args.max_iter)
    out = {
        "n": len(data),
        "seed": args.seed,
        "preprocess_ns": preprocess_ns,
        "seed_ns": ladder.seed_ns,
        "upscale_ns": ladder.upscale_ns,
        "levels": [dict(level.codebook.to_dict(), main_ns=level.main_ns) for level in ladder.levels],
    }
    print(json.dumps(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logkmeans", description="Log-time 1-D k-means.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_input(p, required=True):
        if required:
            p.add_argument("input", help="input file, or - for stdin")
        else:
            p.add_argument("input", nargs="?", help="input file (default: synthetic channel)")
        p.add_argument("--format", choices=("csv", "raw"), default="csv",
                       help="csv: one 'value' or 'value,weight' per line; raw: little-endian float64")
        p.add_argument("--weights", action="store_true", help="expect a weight column")
        p.add_argument("--assume-sorted", action="store_true", help="input is already sorted; skip the sort")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-iter", type=int, default=300)

    p = sub.add_parser("cluster", help="cluster one dataset and print a JSON report")
    add_input(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--local-trials", type=int, default=None)
    p.add_argument("--fast-two-cluster", action="store_true", help="with --k 2, use the binary-search solver")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("verify", help="run randomized oracle equivalence suites")
    p.add_argument("--suite", action="append", choices=list(verify.SUITES),
                   help="suite to run (repeatable; default: all)")
    p.add_argument("--cases", type=int, default=None, help="instances per suite")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time fast and naive pipelines, CSV on stdout")
    p.add_argument("--grid", default="n=65536,1048576;k=2,16")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--data", choices=("uniform", "blobs"), default="blobs")
    p.add_argument("--method", choices=("fast", "naive", "both"), default="both")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("quantize", help="seed a codebook and upscale it bit by bit")
    add_input(p, required=False)
    p.add_argument("--seed-bits", type=int, default=3)
    p.add_argument("--target-bits", type=int, default=8)
    p.add_argument("--n", type=int, default=CHANNEL_SIZE, help="synthetic channel length")
    p.set_defaults(func=cmd_quantize)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InvalidInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
