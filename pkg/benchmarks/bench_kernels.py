"""Time the jitted kernels against their pure numpy fallbacks.

Run from the repo root:

    python benchmarks/bench_kernels.py

The same comparison is available process-wide via ABELIFT_NO_NUMBA=1,
which forces every kernel onto the fallback path.
"""
from __future__ import annotations

import time

import numpy as np

from abelift import kernels
from abelift.graphs import random_regular


def best_of(fn, args, repeats=3):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_count_hikes():
    g = random_regular(24, 3, seed=1)
    args = (g.adj, g.eid_table, g.m, 2 * 5, 5 + 1, True, 0, g.n)
    return "count_hikes n=24 d=3 k=5", getattr(kernels, "_count_hikes_nb", None), \
        kernels._count_hikes_np, args


def bench_min_weight_affine():
    rng = np.random.default_rng(2)
    base = rng.integers(0, 1 << 62, size=2, dtype=np.uint64)
    basis = rng.integers(0, 1 << 62, size=(20, 2), dtype=np.uint64)
    return "min_weight_affine 2^20 cosets", getattr(kernels, "_min_weight_affine_nb", None), \
        kernels._min_weight_affine_np, (base, basis, False)


def bench_rayleigh():
    rng = np.random.default_rng(3)
    mat = rng.standard_normal((14, 14))
    mat = mat + mat.T
    return "rayleigh_01_max n=14", getattr(kernels, "_rayleigh_nb", None), \
        kernels._rayleigh_np, (mat,)


def bench_bias_scan():
    rng = np.random.default_rng(4)
    support = rng.integers(5, size=(64, 6))
    angles = 2.0 * np.pi * np.arange(5) / 5
    args = (support, 5, np.cos(angles), np.sin(angles))
    return "bias_scan ellp=5 m=6", getattr(kernels, "_bias_scan_nb", None), \
        kernels._bias_scan_np, args


def main():
    print(f"kernel implementation: {kernels.IMPL}")
    if not kernels.HAVE_NUMBA:
        print("numba unavailable or disabled; timing the fallback only")
    benches = [bench_count_hikes, bench_min_weight_affine,
               bench_rayleigh, bench_bias_scan]
    header = f"{'kernel':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for bench in benches:
        name, nb_fn, np_fn, args = bench()
        t_np, out_np = best_of(np_fn, args)
        if kernels.HAVE_NUMBA:
            nb_fn(*args)  # warm the JIT outside the timer
            t_nb, out_nb = best_of(nb_fn, args)
            if not np.isclose(float(out_nb), float(out_np)):
                raise SystemExit(f"{name}: paths disagree ({out_nb} vs {out_np})")
            print(f"{name:34s} {t_nb:9.4f}s {t_np:9.4f}s {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:34s} {'-':>10s} {t_np:9.4f}s {'-':>8s}")


if __name__ == "__main__":
    main()
