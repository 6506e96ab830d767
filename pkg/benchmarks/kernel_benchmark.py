#!/usr/bin/env python3
"""Time the numba-compiled kernels against the plain numpy builds.

Run from the repository root:

    python3 benchmarks/kernel_benchmark.py [--repeats 5]

The numba path is what the package uses by default; ISGSIM_NO_NUMBA=1
switches the package to the numpy build measured here.
"""

import argparse
import time

import numpy as np

from isgsim import _kernels

N_PHI = 256
PHI = 2 * np.pi * np.arange(N_PHI) / N_PHI
I0 = 1.0 + np.cos(PHI)


def bench_small(fn):
    fn(I0, 30.0, N_PHI // 2, 1, 1.0, 2.0, 400)


def bench_large(fn):
    fn(30.0, N_PHI // 2, 1, 1.0, 2.0, 400, N_PHI, 1.0 + 0j, 1.0 + 0j)


PROBE_Z = np.linspace(0.0, 2.0, 401)
PROBE_A0 = 1.0 + 0.05 * np.sin(PROBE_Z)
PROBE_A1 = (0.3 + 0.2j) * np.exp(-0.3 * PROBE_Z)


def bench_probe(fn):
    fn(PROBE_Z, PROBE_A0, PROBE_A1, 2)


RATE_MAT = np.array(
    [
        [-1250.0, 312.5 + 100.0, 100.0],
        [1250.0, -412.5 - 1250.0, 0.0],
        [0.0, 1250.0, -100.0],
    ]
)
RATE_N0 = np.array([1.0, 0.0, 0.0])


def bench_rate(fn):
    fn(RATE_MAT, RATE_N0, 1e-5, 50_000, 5_000)


CASES = [
    ("small_angle_march (n_z=400)", bench_small, "small_angle_march"),
    ("large_angle_march (n_z=400)", bench_large, "large_angle_march"),
    ("probe_march (400 intervals)", bench_probe, "probe_march"),
    ("rate_rk4 (50k steps)", bench_rate, "rate_rk4"),
]


def time_call(runner, fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        runner(fn)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if not _kernels.NUMBA_ENABLED:
        print("numba path unavailable (disabled or not installed); timing numpy only")

    print(f"{'kernel':34} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for label, runner, name in CASES:
        fn_numpy = getattr(_kernels, name + "_numpy")
        t_numpy = time_call(runner, fn_numpy, args.repeats)
        if _kernels.NUMBA_ENABLED:
            fn_numba = getattr(_kernels, name)
            runner(fn_numba)  # compile outside the timing
            t_numba = time_call(runner, fn_numba, args.repeats)
            print(
                f"{label:34} {t_numpy * 1e3:8.2f}ms {t_numba * 1e3:8.2f}ms "
                f"{t_numpy / t_numba:7.1f}x"
            )
        else:
            print(f"{label:34} {t_numpy * 1e3:8.2f}ms {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
