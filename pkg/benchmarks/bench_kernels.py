"""Benchmark the compiled kernel backend against the pure-Python fallback.

Times the three hot paths behind explanation and mining workloads:

* closed-form linear entailment (the inner loop of every deletion scan),
* exhaustive completion enumeration for a small network,
* dataset coverage counting (the inner loop of the miner).

Run:  python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

from axaclin._kernels import get_backend
from axaclin.prng import Xoshiro256StarStar

N_FEATURES = 16
N_QUERIES = 2000
N_ROWS = 4096
N_COVERAGE_QUERIES = 2000
NN_HIDDEN = 8
NN_FREE = 12


def _dyadic(rng, lo=-4.0, hi=4.0):
    # Multiples of 2^-10 keep float sums bit-identical across backends.
    span = int((hi - lo) * 1024)
    return lo + rng.below(span + 1) / 1024.0


def build_inputs():
    rng = Xoshiro256StarStar(2024)
    weights = [_dyadic(rng) for _ in range(N_FEATURES)]
    bias = _dyadic(rng)
    queries = []
    for _ in range(N_QUERIES):
        mask = rng.below(1 << N_FEATURES)
        bits = rng.below(1 << N_FEATURES) & mask
        queries.append((mask, bits, bool(rng.below(2))))
    w_hidden = [[_dyadic(rng, -1.0, 1.0) for _ in range(N_FEATURES)] for _ in range(NN_HIDDEN)]
    b_hidden = [_dyadic(rng, -1.0, 1.0) for _ in range(NN_HIDDEN)]
    w_out = [_dyadic(rng, -1.0, 1.0) for _ in range(NN_HIDDEN)]
    b_out = _dyadic(rng, -1.0, 1.0)
    nn_queries = []
    fixed = N_FEATURES - NN_FREE
    for _ in range(40):
        mask = 0
        while bin(mask).count("1") != fixed:
            mask = rng.below(1 << N_FEATURES)
        bits = rng.below(1 << N_FEATURES) & mask
        nn_queries.append((mask, bits, bool(rng.below(2))))
    rows = [rng.below(1 << N_FEATURES) for _ in range(N_ROWS)]
    labels = [int(rng.below(2)) for _ in range(N_ROWS)]
    cov_queries = []
    for _ in range(N_COVERAGE_QUERIES):
        mask = rng.below(1 << N_FEATURES)
        cov_queries.append((mask, rng.below(1 << N_FEATURES) & mask))
    return {
        "linear": (weights, bias, queries),
        "nn": (w_hidden, b_hidden, w_out, b_out, nn_queries),
        "coverage": (rows, labels, cov_queries),
    }


def bench_linear(backend, inputs):
    weights, bias, queries = inputs["linear"]
    oracle = backend.make_linear_oracle(weights, bias)
    t0 = time.perf_counter()
    acc = 0
    for mask, bits, want in queries:
        acc += oracle.entails(mask, bits, want)
    return time.perf_counter() - t0, acc


def bench_linear_exhaustive(backend, inputs):
    weights, bias, _ = inputs["linear"]
    oracle = backend.make_linear_oracle(weights, bias)
    _, _, _, _, nn_queries = inputs["nn"]
    t0 = time.perf_counter()
    acc = 0
    for mask, bits, want in nn_queries:
        acc += oracle.entails_exhaustive(mask, bits, want)
    return time.perf_counter() - t0, acc


def bench_nn(backend, inputs):
    w_hidden, b_hidden, w_out, b_out, queries = inputs["nn"]
    oracle = backend.make_nn_oracle(w_hidden, b_hidden, w_out, b_out)
    t0 = time.perf_counter()
    acc = 0
    for mask, bits, want in queries:
        acc += oracle.entails(mask, bits, want)
    return time.perf_counter() - t0, acc


def bench_coverage(backend, inputs):
    rows, labels, queries = inputs["coverage"]
    import numpy as np

    row_bits = np.asarray(rows, dtype=np.uint64)
    lab = np.asarray(labels, dtype=np.int8)
    t0 = time.perf_counter()
    acc = 0
    for mask, bits in queries:
        pos, neg = backend.coverage_counts(row_bits, lab, mask, bits)
        acc += pos + neg
    return time.perf_counter() - t0, acc


BENCHES = [
    ("linear entails (closed form)", bench_linear),
    ("linear entails (exhaustive 2^12)", bench_linear_exhaustive),
    ("nn entails (exhaustive 2^12)", bench_nn),
    ("coverage counts (4096 rows)", bench_coverage),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()

    inputs = build_inputs()
    backends = []
    try:
        backends.append(("compiled", get_backend("compiled")))
    except ImportError:
        print("compiled backend unavailable; benchmarking fallback only")
    backends.append(("python", get_backend("python")))

    results = {}
    for bench_name, fn in BENCHES:
        for backend_name, backend in backends:
            best, check = min(
                (fn(backend, inputs) for _ in range(args.repeat)),
                key=lambda r: r[0],
            )
            results[bench_name, backend_name] = (best, check)

    width = max(len(name) for name, _ in BENCHES)
    print(f"{'benchmark'.ljust(width)}  {'compiled':>10}  {'python':>10}  {'speedup':>8}")
    for bench_name, _ in BENCHES:
        cell = {}
        for backend_name, _ in backends:
            t, _ = results[bench_name, backend_name]
            cell[backend_name] = t
        compiled = cell.get("compiled")
        python = cell["python"]
        ratio = f"{python / compiled:8.1f}x" if compiled else "     n/a"
        ctxt = f"{compiled * 1e3:8.2f}ms" if compiled else "       n/a"
        print(f"{bench_name.ljust(width)}  {ctxt}  {python * 1e3:8.2f}ms  {ratio}")

    mismatched = [
        bench_name
        for bench_name, _ in BENCHES
        if len({results[bench_name, b][1] for b, _ in backends}) != 1
    ]
    if mismatched:
        print("CHECKSUM MISMATCH:", ", ".join(mismatched))
        return 1
    print("checksums agree across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
