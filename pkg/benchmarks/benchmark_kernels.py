#!/usr/bin/env python3
"""Benchmark the numba contraction kernels against the pure-numpy fallback.

The contraction kernel enumerates every joint configuration of a graph's
variables, so its cost grows as the product of alphabet sizes; this script
times both backends on random binary chains of growing length, for both
semirings.

Usage:
    python benchmarks/benchmark_kernels.py
    python benchmarks/benchmark_kernels.py --edges 10 14 18 --repeats 5
    python benchmarks/benchmark_kernels.py --json results.json
"""

import argparse
import json
import time

import numpy as np

from nfg import GraphBuilder
from nfg._kernels import (
    NUMBA_AVAILABLE,
    contract_min_sum_numpy,
    contract_sum_product_numpy,
)
from nfg.evaluate import _Compiled
from nfg.semirings import MIN_SUM, SUM_PRODUCT

if NUMBA_AVAILABLE:
    from nfg._kernels import contract_min_sum_numba, contract_sum_product_numba


def ring_graph(n_edges, rng):
    """Closed chain of n random 2x2 factors: n binary variables."""
    b = GraphBuilder()
    s = b.alphabet("s", 2)
    for i in range(n_edges):
        b.internal(f"e{i}", s)
    for i in range(n_edges):
        vals = rng.uniform(0.1, 1.0, size=(2, 2))
        b.factor(f"f{i}", [f"e{i}", f"e{(i + 1) % n_edges}"], vals)
    return b.build()


def time_kernel(kernel, compiled, semiring, repeats):
    best = np.inf
    result = None
    for _ in range(repeats):
        out = np.full(1, semiring.zero, dtype=semiring.dtype)
        start = time.perf_counter()
        kernel(
            compiled.values,
            compiled.offsets,
            compiled.strides,
            compiled.out_strides,
            compiled.sizes,
            out,
        )
        best = min(best, time.perf_counter() - start)
        result = out[0]
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--edges", type=int, nargs="+", default=[8, 12, 16, 20])
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", default=None, help="also write results to this file")
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    if NUMBA_AVAILABLE:
        # trigger JIT compilation outside the timed region
        warm = _Compiled(ring_graph(4, rng), SUM_PRODUCT)
        time_kernel(contract_sum_product_numba, warm, SUM_PRODUCT, 1)
        warm_min = _Compiled(ring_graph(4, rng), MIN_SUM)
        time_kernel(contract_min_sum_numba, warm_min, MIN_SUM, 1)
    else:
        print("numba not available; only the numpy fallback will run")

    rows = []
    print(f"{'edges':>6} {'configs':>10} {'semiring':>12} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    print("-" * 66)
    for n in args.edges:
        graph = ring_graph(n, rng)
        for semiring, np_kernel, nb_kernel in (
            (SUM_PRODUCT, contract_sum_product_numpy, "contract_sum_product_numba"),
            (MIN_SUM, contract_min_sum_numpy, "contract_min_sum_numba"),
        ):
            compiled = _Compiled(graph, semiring)
            t_numpy, z_numpy = time_kernel(np_kernel, compiled, semiring, args.repeats)
            row = {
                "edges": n,
                "configs": 2**n,
                "semiring": semiring.name,
                "numpy_s": t_numpy,
            }
            if NUMBA_AVAILABLE:
                kernel = globals()[nb_kernel]
                t_numba, z_numba = time_kernel(kernel, compiled, semiring, args.repeats)
                assert z_numba == z_numpy, "backends disagree"
                row["numba_s"] = t_numba
                row["speedup"] = t_numpy / t_numba
                print(
                    f"{n:>6} {2**n:>10} {semiring.name:>12} {t_numpy:>12.6f} "
                    f"{t_numba:>12.6f} {row['speedup']:>8.1f}x"
                )
            else:
                print(f"{n:>6} {2**n:>10} {semiring.name:>12} {t_numpy:>12.6f} {'-':>12} {'-':>9}")
            rows.append(row)

    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()
