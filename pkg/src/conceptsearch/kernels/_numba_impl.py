"""Numba-compiled kernels (default backend when numba imports)."""

import numpy as np
from numba import njit


@njit(cache=True)
def orthogonalize_columns(w, v, tol, max_sweeps):
    rows, cols = w.shape
    vrows = v.shape[0]
    for _ in range(max_sweeps):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                app = 0.0
                aqq = 0.0
                apq = 0.0
                for i in range(rows):
                    wip = w[i, p]
                    wiq = w[i, q]
                    app += wip * wip
                    aqq += wiq * wiq
                    apq += wip * wiq
                if app == 0.0 or aqq == 0.0:
                    continue
                if abs(apq) <= tol * np.sqrt(app * aqq):
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                for i in range(rows):
                    wip = w[i, p]
                    wiq = w[i, q]
                    w[i, p] = c * wip - s * wiq
                    w[i, q] = s * wip + c * wiq
                for i in range(vrows):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = c * vip - s * viq
                    v[i, q] = s * vip + c * viq
        if not rotated:
            break


@njit(cache=True)
def _sqdist(x, i, c, j):
    d = 0.0
    for col in range(x.shape[1]):
        diff = x[i, col] - c[j, col]
        d += diff * diff
    return d


@njit(cache=True)
def farthest_first(x, k, start):
    n, dim = x.shape
    centroids = np.empty((k, dim), dtype=np.float64)
    for col in range(dim):
        centroids[0, col] = x[start, col]
    mind = np.empty(n, dtype=np.float64)
    for i in range(n):
        mind[i] = _sqdist(x, i, centroids, 0)
    for j in range(1, k):
        nxt = 0
        best = mind[0]
        for i in range(1, n):
            if mind[i] > best:
                best = mind[i]
                nxt = i
        for col in range(dim):
            centroids[j, col] = x[nxt, col]
        for i in range(n):
            d = _sqdist(x, i, centroids, j)
            if d < mind[i]:
                mind[i] = d
    return centroids


@njit(cache=True)
def lloyd(x, centroids, max_iter):
    n, dim = x.shape
    k = centroids.shape[0]
    centroids = centroids.copy()
    labels = np.full(n, -1, dtype=np.int64)
    new_labels = np.empty(n, dtype=np.int64)
    dists = np.empty(n, dtype=np.float64)
    counts = np.empty(k, dtype=np.int64)
    history = np.empty(max_iter, dtype=np.float64)
    steps = 0
    for it in range(max_iter):
        for i in range(n):
            best_j = 0
            best_d = _sqdist(x, i, centroids, 0)
            for j in range(1, k):
                d = _sqdist(x, i, centroids, j)
                if d < best_d:
                    best_d = d
                    best_j = j
            new_labels[i] = best_j
            dists[i] = best_d
        for j in range(k):
            counts[j] = 0
        for i in range(n):
            counts[new_labels[i]] += 1
        reseeded = False
        for j in range(k):
            if counts[j] == 0:
                i_star = 0
                best = dists[0]
                for i in range(1, n):
                    if dists[i] > best:
                        best = dists[i]
                        i_star = i
                counts[new_labels[i_star]] -= 1
                new_labels[i_star] = j
                counts[j] = 1
                for col in range(dim):
                    centroids[j, col] = x[i_star, col]
                dists[i_star] = 0.0
                reseeded = True
        inertia = 0.0
        for i in range(n):
            inertia += dists[i]
        history[it] = inertia
        steps = it + 1
        converged = not reseeded
        if converged:
            for i in range(n):
                if new_labels[i] != labels[i]:
                    converged = False
                    break
        for i in range(n):
            labels[i] = new_labels[i]
        for j in range(k):
            if counts[j] > 0:
                for col in range(dim):
                    centroids[j, col] = 0.0
        for i in range(n):
            j = labels[i]
            if counts[j] > 0:
                for col in range(dim):
                    centroids[j, col] += x[i, col]
        for j in range(k):
            if counts[j] > 0:
                for col in range(dim):
                    centroids[j, col] /= counts[j]
        if converged:
            break
    final = 0.0
    for i in range(n):
        final += _sqdist(x, i, centroids, labels[i])
    return labels, centroids, history[:steps].copy(), final
