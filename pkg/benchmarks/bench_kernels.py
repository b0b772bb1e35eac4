#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage:
    python benchmarks/bench_kernels.py [--with-n6]

Times three hot paths on both backends: monotone-family enumeration,
weight/pivot counting across every monotone family on [5], and the
branch-and-bound searches that reproduce the exact extremal theorems.
--with-n6 adds the 7.8M-family enumeration on [6] (needs ~1 GB on the
pure path and a few minutes there).
"""

import argparse
import time

from ekrlab._kernels import _pure
from ekrlab.search import lex_universe, shift_predecessor_masks

try:
    from ekrlab._kernels import _core
except ImportError:
    _core = None


def timed(fn, *args, repeat=3):
    best = None
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def bench_monotone(impl, n):
    return impl.monotone_masks(n)


def bench_weight_pivot(impl, masks, n):
    total = 0
    for bits in masks:
        w, piv = impl.weight_pivot_counts(int(bits), n)
        total += w[1] + piv[0][1]
    return total


def bench_search(impl, n, k, mode, param, shifted):
    universe = lex_universe(n, k)
    preds = shift_predecessor_masks(n, k, universe)
    return impl.search_uniform(universe, preds, mode, param, shifted)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--with-n6", action="store_true",
                    help="include the [6] enumeration (slow on the pure path)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _core is None:
        print("compiled kernels not built; showing the pure backend only")
    backends = [("pure", _pure)] + ([("compiled", _core)] if _core else [])

    jobs = [
        ("monotone_masks(5)", bench_monotone, (5,)),
        ("search EKR [7]^(3) shifted", bench_search, (7, 3, "t", 1, True)),
        ("search 2-int [7]^(3) shifted", bench_search, (7, 3, "t", 2, True)),
        ("search match<=2 [9]^(2) shifted", bench_search, (9, 2, "match", 2, True)),
        ("search EKR [7]^(2) plain", bench_search, (7, 2, "t", 1, False)),
    ]
    if args.with_n6:
        jobs.insert(1, ("monotone_masks(6)", bench_monotone, (6,)))

    masks5 = _pure.monotone_masks(5)
    jobs.append(("weight+pivot counts x 7581 (n=5)", bench_weight_pivot,
                 (masks5, 5)))

    width = max(len(name) for name, _, _ in jobs)
    header = f"{'kernel job'.ljust(width)}  " + "".join(
        f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn, fargs in jobs:
        times = []
        results = []
        for _, impl in backends:
            dt, result = timed(fn, impl, *fargs, repeat=args.repeat)
            times.append(dt)
            results.append(result)
        row = f"{name.ljust(width)}  " + "".join(f"{t * 1000:>10.1f}ms" for t in times)
        if len(results) == 2:
            a, b = results
            if hasattr(a, "__len__") and list(a) != list(b):
                row += "  MISMATCH"
            elif isinstance(a, tuple) and a[:2] != b[:2]:
                row += "  MISMATCH"
            else:
                row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
