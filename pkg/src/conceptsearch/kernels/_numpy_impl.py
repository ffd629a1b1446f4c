"""Pure-NumPy kernel implementations (fallback backend).

Same contracts as the numba versions in _numba_impl; which one runs is
decided in the package __init__.
"""

import math

import numpy as np


def orthogonalize_columns(w, v, tol, max_sweeps):
    """One-sided Jacobi sweeps: rotate column pairs of w (accumulating the
    rotations in v) until all pairs are orthogonal to relative tolerance."""
    rows, cols = w.shape
    for _ in range(max_sweeps):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                wp = w[:, p]
                wq = w[:, q]
                app = float(wp @ wp)
                aqq = float(wq @ wq)
                apq = float(wp @ wq)
                if app == 0.0 or aqq == 0.0:
                    continue
                if abs(apq) <= tol * math.sqrt(app * aqq):
                    continue
                rotated = True
                tau = (aqq - app) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                new_p = c * wp - s * wq
                new_q = s * wp + c * wq
                w[:, p] = new_p
                w[:, q] = new_q
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            break


def farthest_first(x, k, start):
    """Deterministic centroid seeding: the start row, then repeatedly the
    point farthest from the chosen set (first index wins ties)."""
    centroids = np.empty((k, x.shape[1]), dtype=np.float64)
    centroids[0] = x[start]
    mind = ((x - x[start]) ** 2).sum(axis=1)
    for j in range(1, k):
        nxt = int(np.argmax(mind))
        centroids[j] = x[nxt]
        d = ((x - x[nxt]) ** 2).sum(axis=1)
        np.minimum(mind, d, out=mind)
    return centroids


def lloyd(x, centroids, max_iter):
    """Lloyd iterations with deterministic tie-breaking (lowest index wins).

    Empty clusters are reseeded to the point currently farthest from its
    assigned centroid. Returns (labels, centroids, inertia_history,
    final_inertia); the history holds the post-assignment inertia of each
    iteration and is nonincreasing.
    """
    n = x.shape[0]
    k = centroids.shape[0]
    centroids = centroids.astype(np.float64).copy()
    labels = np.full(n, -1, dtype=np.int64)
    history = np.empty(max_iter, dtype=np.float64)
    steps = 0
    for it in range(max_iter):
        d2 = ((x[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1).astype(np.int64)
        dists = d2[np.arange(n), new_labels]
        counts = np.bincount(new_labels, minlength=k)
        reseeded = False
        for j in range(k):
            if counts[j] == 0:
                i_star = int(np.argmax(dists))
                counts[new_labels[i_star]] -= 1
                new_labels[i_star] = j
                counts[j] = 1
                centroids[j] = x[i_star]
                dists[i_star] = 0.0
                reseeded = True
        history[it] = dists.sum()
        steps = it + 1
        converged = not reseeded and np.array_equal(new_labels, labels)
        labels = new_labels
        for j in range(k):
            if counts[j] > 0:
                centroids[j] = x[labels == j].mean(axis=0)
        if converged:
            break
    final = float(((x - centroids[labels]) ** 2).sum())
    return labels, centroids, history[:steps].copy(), final
