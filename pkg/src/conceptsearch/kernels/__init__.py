"""Numeric kernels: one-sided Jacobi SVD and Lloyd k-means iterations.

The numba-compiled backend is used when numba imports; set
CONCEPTSEARCH_DISABLE_NUMBA=1 to force the pure-NumPy fallback. Both
backends implement identical contracts and every kernel test runs against
both. benchmarks/bench_kernels.py compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy_impl

JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 64


def _env_disabled() -> bool:
    return os.environ.get("CONCEPTSEARCH_DISABLE_NUMBA", "").lower() in (
        "1",
        "true",
        "yes",
    )


def _pick_backend():
    if _env_disabled():
        return _numpy_impl, "numpy"
    try:
        from . import _numba_impl
    except ImportError:
        return _numpy_impl, "numpy"
    return _numba_impl, "numba"


_impl, _backend = _pick_backend()


def backend_name() -> str:
    return _backend


def jacobi_svd(a, impl=None):
    """Full SVD of a dense matrix by one-sided Jacobi orthogonalization.

    Returns (u, s, vt) with p = min(m, n) triplets and singular values
    sorted nonincreasing. The factor on the smaller dimension is an exact
    product of plane rotations, hence orthonormal to machine precision;
    the other factor is orthonormal to the sweep tolerance except for
    columns belonging to zero singular values, which are left zero.
    """
    impl = impl or _impl
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    m, n = a.shape
    transposed = m < n
    w = np.array(a.T if transposed else a, dtype=np.float64, order="C")
    cols = w.shape[1]
    v = np.eye(cols)
    impl.orthogonalize_columns(w, v, JACOBI_TOL, JACOBI_MAX_SWEEPS)
    s = np.sqrt((w * w).sum(axis=0))
    order = np.argsort(-s, kind="stable")
    s = s[order]
    w = w[:, order]
    v = v[:, order]
    u = np.zeros_like(w)
    nz = s > 0.0
    u[:, nz] = w[:, nz] / s[nz]
    if transposed:
        # a.T = u s v^T  =>  a = v s u^T
        return v, s, u.T
    return u, s, v.T


def farthest_first(x, k, start, impl=None):
    impl = impl or _impl
    x = np.ascontiguousarray(x, dtype=np.float64)
    return impl.farthest_first(x, int(k), int(start))


def lloyd(x, centroids, max_iter, impl=None):
    impl = impl or _impl
    x = np.ascontiguousarray(x, dtype=np.float64)
    centroids = np.ascontiguousarray(centroids, dtype=np.float64)
    return impl.lloyd(x, centroids, int(max_iter))
