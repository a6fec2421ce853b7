#!/usr/bin/env python3
"""Timing comparison of the numba and numpy simulation kernels.

Runs the open-state counting kernel (Poisson inversion and Gaussian
paths, with and without thermal noise) and the blocked-state kernel on
identical inputs through both backends, then times one full
simulate_detection() call each way.  Outputs are checked bitwise-equal
while timing, so this doubles as a coarse cross-check.

Usage:
    python benchmarks/bench_kernels.py [--n 65536] [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from chargelimit import SimConfig, simulate_detection
from chargelimit.kernels import available_backends, block_kernels, poisson_cdf_table
from chargelimit.rng import uniform_block


def best_of(repeat, fn, *args):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_open(backends, n, repeat):
    lam = 100.0
    k_lo, cdf = poisson_cdf_table(lam)
    empty = np.empty(0, dtype=np.float64)
    u_count = uniform_block(7, 0, 0, n)
    u_thermal = uniform_block(7, 1, 0, n)
    cases = [
        ("open/poisson", (u_count, empty, cdf, k_lo, False, lam, math.sqrt(lam), 0.0, lam, 0.5)),
        ("open/poisson+thermal", (u_count, u_thermal, cdf, k_lo, False, lam, math.sqrt(lam), 1.5, lam, 0.5)),
        ("open/gaussian", (u_count, empty, np.empty(0), 0, True, lam, math.sqrt(lam), 0.0, lam, 0.5)),
    ]
    for label, args in cases:
        times, results = {}, {}
        for backend in backends:
            open_block, _ = block_kernels(backend)
            open_block(*args)  # warm-up (JIT compile on first call)
            times[backend], results[backend] = best_of(repeat, open_block, *args)
        if len(backends) == 2 and tuple(results["numba"]) != tuple(results["numpy"]):
            raise SystemExit(f"{label}: backends disagree!")
        yield label, times


def bench_blocked(backends, n, repeat):
    u = uniform_block(7, 1, 0, n)
    times, results = {}, {}
    for backend in backends:
        _, blocked = block_kernels(backend)
        blocked(u, 1.5, 0.5)
        times[backend], results[backend] = best_of(repeat, blocked, u, 1.5, 0.5)
    if len(backends) == 2 and results["numba"] != results["numpy"]:
        raise SystemExit("blocked: backends disagree!")
    yield "blocked/thermal", times


def bench_end_to_end(backends, trials, repeat):
    import os

    cfg = SimConfig(
        on_current=1.602176634e-12,
        bandwidth=5e4,
        temperature=4.2,
        conductance=1e-13,
        trials=trials,
        seed=20260823,
    )
    times, results = {}, {}
    saved = os.environ.get("CHARGE_LIMIT_BACKEND")
    try:
        for backend in backends:
            os.environ["CHARGE_LIMIT_BACKEND"] = backend
            simulate_detection(cfg)  # warm-up
            times[backend], results[backend] = best_of(
                repeat, simulate_detection, cfg
            )
    finally:
        if saved is None:
            os.environ.pop("CHARGE_LIMIT_BACKEND", None)
        else:
            os.environ["CHARGE_LIMIT_BACKEND"] = saved
    if len(backends) == 2 and results["numba"] != results["numpy"]:
        raise SystemExit("simulate_detection: backends disagree!")
    yield f"simulate_detection({trials})", times


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=65536, help="samples per kernel call")
    ap.add_argument("--repeat", type=int, default=5, help="best-of repetitions")
    ap.add_argument("--trials", type=int, default=200000, help="end-to-end trials")
    args = ap.parse_args()

    backends = available_backends()
    print(f"backends: {', '.join(backends)}   n={args.n}  best of {args.repeat}")
    header = f"{'case':<28}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    rows = []
    rows.extend(bench_open(backends, args.n, args.repeat))
    rows.extend(bench_blocked(backends, args.n, args.repeat))
    rows.extend(bench_end_to_end(backends, args.trials, args.repeat))
    for label, times in rows:
        line = f"{label:<28}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) == 2:
            line += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(line)
    if len(backends) == 2:
        print("all outputs bitwise identical across backends")


if __name__ == "__main__":
    main()
