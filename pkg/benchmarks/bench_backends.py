#!/usr/bin/env python3
"""Benchmark the compiled Monte-Carlo kernels against the pure-numpy
backend on the two hot paths: detector-statistic sampling and
sum-of-k-smallest sampling.

Usage: python benchmarks/bench_backends.py [--trials N] [--repeat R]
"""

import argparse
import time

from covertsim import _backend
from covertsim.model import substream_rng


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=500_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    cases = [
        ("detector stats K=25", lambda rng, b: _backend.detector_stat_samples(
            rng, args.trials, 25, 1.0, 0.83, 1.0, backend=b)),
        ("detector stats K=121", lambda rng, b: _backend.detector_stat_samples(
            rng, args.trials, 121, 1.0, 0.83, 1.0, backend=b)),
        ("sum 43 smallest of 500", lambda rng, b: _backend.sum_k_smallest_samples(
            rng, args.trials, 500, 43, backend=b)),
        ("weighted sum K=43", lambda rng, b: _backend.weighted_exp_sum_samples(
            rng, [0.05] * 43, args.trials, backend=b)),
    ]

    backends = _backend.available_backends()
    print(f"trials = {args.trials}, best of {args.repeat}\n")
    print(f"{'kernel':<26}" + "".join(f"{b:>12}" for b in backends) +
          ("     speedup" if len(backends) == 2 else ""))
    for name, fn in cases:
        row = f"{name:<26}"
        times = {}
        for b in backends:
            t = best_of(args.repeat, lambda: fn(substream_rng(0, 0), b))
            times[b] = t
            row += f"{t:>11.3f}s"
        if len(backends) == 2:
            row += f"{times['python'] / times['compiled']:>11.2f}x"
        print(row)


if __name__ == "__main__":
    main()
