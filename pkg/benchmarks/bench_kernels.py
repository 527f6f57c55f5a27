"""Time the compiled kernels against their numpy twins, and accelerated fits.

    python3 benchmarks/bench_kernels.py [--n 5000] [--k 2 4 6] [--repeat 5]

Both backends run in one process: the dispatcher reads the backend flag on
every call, so the script flips it between timings.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from simplexlearn import _backend, kernels
from simplexlearn.geometry import diameter_simplex
from simplexlearn.optimizer import FitConfig, fit
from simplexlearn.risk import INSIDE_RTOL
from simplexlearn.sampling import random_simplex, sample_uniform


def best_of(fn, repeat: int) -> float:
    fn()  # compile or warm caches
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_rows(k: int, n: int, repeat: int):
    truth = random_simplex(k, seed=k)
    x = sample_uniform(truth, n, seed=1).points * 1.1  # some points outside
    s = truth.scaled(0.9, about=truth.vertices.mean(axis=1))
    ainv = np.ascontiguousarray(s.frame[0])
    idx = np.arange(n)
    tol = INSIDE_RTOL * diameter_simplex(s)
    theta = np.ascontiguousarray(s.vertices)
    cases = {
        "frame": (lambda: kernels.frame_numba(theta), lambda: kernels.frame_numpy(theta)),
        "distances": (lambda: kernels.distances_numba(x, ainv),
                      lambda: kernels.distances_numpy(x, ainv)),
        "data_terms": (lambda: kernels.data_terms_numba(x, idx, ainv, 1.0, tol, tol),
                       lambda: kernels.data_terms_numpy(x, idx, ainv, 1.0, tol, tol)),
    }
    for name, (fast, slow) in cases.items():
        t_nb, t_np = best_of(fast, repeat), best_of(slow, repeat)
        yield name, k, n, t_nb, t_np


def fit_time(k: int, n: int, accelerate: bool, numba: bool, iters: int, repeat: int) -> float:
    d = sample_uniform(random_simplex(k, seed=k), n, seed=2)
    cfg = FitConfig(iterations=iters, accelerate=accelerate,
                    seed=np.random.SeedSequence(3), trace_every=iters)
    saved = _backend.USE_NUMBA
    _backend.USE_NUMBA = numba and _backend.NUMBA_AVAILABLE
    try:
        return best_of(lambda: fit(d, k, cfg), repeat)
    finally:
        _backend.USE_NUMBA = saved


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=5000)
    ap.add_argument("--k", type=int, nargs="+", default=[2, 4, 6])
    ap.add_argument("--iters", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args(argv)
    if not _backend.NUMBA_AVAILABLE:
        print("numba is not importable; only the numpy path can be timed")

    print(f"{'kernel':<12}{'K':>3}{'n':>8}{'numba ms':>12}{'numpy ms':>12}{'ratio':>8}")
    for k in a.k:
        for name, kk, n, t_nb, t_np in kernel_rows(k, a.n, a.repeat):
            print(f"{name:<12}{kk:>3}{n:>8}{1e3 * t_nb:>12.3f}{1e3 * t_np:>12.3f}{t_np / t_nb:>8.1f}")

    print()
    print(f"fit, {a.iters} iterations, n={a.n}")
    print(f"{'K':>3}{'backend':>9}{'accel off s':>13}{'accel on s':>12}{'speedup':>9}")
    for k in a.k:
        for numba in (True, False):
            off = fit_time(k, a.n, False, numba, a.iters, max(1, a.repeat // 2))
            on = fit_time(k, a.n, True, numba, a.iters, max(1, a.repeat // 2))
            name = "numba" if numba else "numpy"
            print(f"{k:>3}{name:>9}{off:>13.3f}{on:>12.3f}{off / on:>9.2f}")


if __name__ == "__main__":
    main()
