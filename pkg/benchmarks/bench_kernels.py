"""Benchmark the numba kernels against the pure-NumPy fallback.

Times the one-sided Jacobi SVD and the Lloyd k-means loop on dense random
matrices at a few sizes and prints a comparison table. Run with:

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from conceptsearch import kernels
from conceptsearch.kernels import _numba_impl, _numpy_impl

SVD_SHAPES = [(60, 40), (150, 80), (300, 120)]
KMEANS_SHAPES = [(500, 10, 5), (2000, 20, 8), (8000, 30, 10)]
REPEATS = 3


def _best_of(fn, repeats=REPEATS):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_svd(rng):
    rows = []
    for shape in SVD_SHAPES:
        a = rng.standard_normal(shape)
        kernels.jacobi_svd(a, impl=_numba_impl)  # JIT warm-up
        t_numpy = _best_of(lambda: kernels.jacobi_svd(a, impl=_numpy_impl))
        t_numba = _best_of(lambda: kernels.jacobi_svd(a, impl=_numba_impl))
        rows.append((f"jacobi_svd {shape[0]}x{shape[1]}", t_numpy, t_numba))
    return rows


def bench_kmeans(rng):
    rows = []
    for n, dim, k in KMEANS_SHAPES:
        x = rng.standard_normal((n, dim))
        init = kernels.farthest_first(x, k, 0, impl=_numpy_impl)
        kernels.lloyd(x, init, 100, impl=_numba_impl)  # JIT warm-up
        t_numpy = _best_of(lambda: kernels.lloyd(x, init, 100, impl=_numpy_impl))
        t_numba = _best_of(lambda: kernels.lloyd(x, init, 100, impl=_numba_impl))
        rows.append((f"lloyd n={n} d={dim} k={k}", t_numpy, t_numba))
    return rows


def main():
    rng = np.random.default_rng(0)
    rows = bench_svd(rng) + bench_kmeans(rng)
    print(f"{'kernel':<28}{'numpy':>12}{'numba':>12}{'speedup':>10}")
    for name, t_numpy, t_numba in rows:
        print(
            f"{name:<28}{t_numpy * 1e3:>10.1f}ms{t_numba * 1e3:>10.1f}ms"
            f"{t_numpy / t_numba:>9.1f}x"
        )
    print(f"\nactive backend for library calls: {kernels.backend_name()}")
    print("(set CONCEPTSEARCH_DISABLE_NUMBA=1 to force the numpy fallback)")


if __name__ == "__main__":
    main()
