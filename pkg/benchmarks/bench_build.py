#!/usr/bin/env python3
"""Benchmark the compiled triangulation kernel against the pure-Python
fallback on uniform points at unit intensity.

Usage: python benchmarks/bench_build.py [--max-exp 6] [--repeats 3]
"""

import argparse
import math
import time

import numpy as np

from pdx import delaunay
from pdx._kernel import get_backend


def bench(impl, pts, repeats):
    order = delaunay._insertion_order(pts)
    xs, ys = pts[:, 0].copy(), pts[:, 1].copy()
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        impl.triangulate(xs, ys, order)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-exp", type=int, default=6,
                    help="largest size is 10**max_exp (compiled only above 1e5)")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    compiled = get_backend("compiled")
    pure = get_backend("pure")

    print(f"{'n':>9}  {'compiled [s]':>12}  {'pure [s]':>10}  {'speedup':>8}")
    for e in range(3, args.max_exp + 1):
        n = 10 ** e
        pts = rng.random((n, 2)) * math.sqrt(n)
        tc = bench(compiled, pts, args.repeats)
        if n <= 100_000:
            tp = bench(pure, pts, max(1, args.repeats - 2))
            print(f"{n:>9}  {tc:>12.4f}  {tp:>10.3f}  {tp / tc:>8.1f}x")
        else:
            print(f"{n:>9}  {tc:>12.4f}  {'-':>10}  {'-':>8}")


if __name__ == "__main__":
    main()
