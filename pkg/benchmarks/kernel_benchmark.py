#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-numpy fallback.

Times the symmetric eigendecomposition and the local-descent kernel on the
workloads the toolkit actually runs: second-moment matrices of sampled
gradients and multistart descents on embedded benchmark functions.
"""

import time

import numpy as np

from asopt import kernels
from asopt.kernels import _pure
from asopt.objectives import get_function, make_embedded
from asopt.solver import ReducedProblem

try:
    from asopt.kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, repeats=3):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_jacobi():
    print("symmetric eigendecomposition (cyclic Jacobi)")
    print(f"{'n':>6} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    rng = np.random.default_rng(0)
    for n in (50, 100, 200):
        G = rng.standard_normal((n, n))
        S = G @ G.T
        t_pure = timeit(lambda: _pure.jacobi_eigh(S))
        row = f"{n:>6} {t_pure * 1e3:>12.1f}"
        if _fast is not None:
            t_fast = timeit(lambda: _fast.jacobi_eigh(S))
            row += f" {t_fast * 1e3:>14.2f} {t_pure / t_fast:>8.0f}x"
        print(row)


def bench_descent():
    print("\nmultistart local descent (200 starts, exact embedding basis)")
    print(f"{'function':>16} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    rng = np.random.default_rng(1)
    for name in ("styblinski-tang", "rosenbrock", "shubert"):
        base = get_function(name)
        obj = make_embedded(base, 100, seed=0)
        rp = ReducedProblem(obj, obj.effective_basis, np.zeros(100))
        fid, param, hw, ctr, B, q = rp.plan()
        starts = rng.uniform(-1, 1, size=(200, base.d_e))

        def run(mod):
            for y0 in starts:
                mod.bfgs_embedded(fid, param, hw, ctr, B, q, y0, 1e-8, 1e-12, 500)

        t_pure = timeit(lambda: run(_pure), repeats=1)
        row = f"{name:>16} {t_pure * 1e3:>12.0f}"
        if _fast is not None:
            t_fast = timeit(lambda: run(_fast))
            row += f" {t_fast * 1e3:>14.1f} {t_pure / t_fast:>8.0f}x"
        print(row)


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}")
    if _fast is None:
        print("compiled extension not available; pure timings only\n")
    bench_jacobi()
    bench_descent()
