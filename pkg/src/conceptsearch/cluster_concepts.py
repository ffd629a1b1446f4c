"""Query-time concept extraction: LSI projection plus k-means clustering.

The items matching a query are projected into a low-rank latent space via
truncated SVD of their term-document matrix, clustered with k-means, and
each nonempty cluster becomes a concept whose popularity is simply the
number of items in it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .community_concepts import Concept, LABEL_TERMS
from .vectors import TermVector, cosine


@dataclass
class LatentSpace:
    rank: int
    term_order: list[str]
    term_basis: np.ndarray  # (n_terms, rank), orthonormal columns
    singular_values: np.ndarray  # (rank,), nonincreasing
    doc_coords: dict[str, np.ndarray]  # item id -> (rank,)


@dataclass
class ClusterAssignment:
    k: int
    centroids: np.ndarray
    members: dict[str, int]  # item id -> cluster index
    inertia: float
    inertia_history: np.ndarray


def lsi_project(item_vectors: Mapping[str, TermVector], r: int) -> LatentSpace:
    """Rank-r latent space of the given item vectors.

    The term-document matrix is decomposed with the one-sided Jacobi SVD
    kernel; document coordinates are the projections u_i * s_i. r is
    clamped to min(#docs, #terms).
    """
    if not item_vectors:
        raise ValueError("need at least one item vector")
    if r < 1:
        raise ValueError("rank must be >= 1")
    ids = sorted(item_vectors)
    terms = sorted({t for vec in item_vectors.values() for t in vec.entries})
    if not terms:
        # All-empty vectors: degenerate rank-1 space at the origin.
        zero = np.zeros(1)
        return LatentSpace(1, [], np.zeros((0, 1)), np.zeros(1), {i: zero for i in ids})
    term_pos = {t: j for j, t in enumerate(terms)}
    x = np.zeros((len(ids), len(terms)))
    for i, iid in enumerate(ids):
        for term, w in item_vectors[iid].entries.items():
            x[i, term_pos[term]] = w
    r = min(r, len(ids), len(terms))
    u, s, vt = kernels.jacobi_svd(x)
    coords = u[:, :r] * s[:r]
    return LatentSpace(
        rank=r,
        term_order=terms,
        term_basis=vt[:r].T.copy(),
        singular_values=s[:r].copy(),
        doc_coords={iid: coords[i].copy() for i, iid in enumerate(ids)},
    )


def kmeans(
    coords: Mapping[str, np.ndarray],
    k: int,
    seed: int,
    max_iter: int = 100,
) -> ClusterAssignment:
    """Seed-deterministic k-means over item coordinates.

    The first centroid is a seed-selected point and the rest come from
    farthest-first traversal, so runs are reproducible; inertia is
    nonincreasing across Lloyd iterations.
    """
    ids = sorted(coords)
    n = len(ids)
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} items available")
    x = np.stack([np.asarray(coords[iid], dtype=np.float64) for iid in ids])
    start = random.Random(seed).randrange(n)
    init = kernels.farthest_first(x, k, start)
    labels, centroids, history, final = kernels.lloyd(x, init, max_iter)
    return ClusterAssignment(
        k=k,
        centroids=centroids,
        members={iid: int(labels[i]) for i, iid in enumerate(ids)},
        inertia=final,
        inertia_history=history,
    )


def clusters_to_concepts(
    assignment: ClusterAssignment,
    tag_counts: Mapping[str, Mapping[str, int]],
) -> list[Concept]:
    """One concept per nonempty cluster.

    Concept vectors are normalized sums of member tag counts, labels are
    the most frequent tags, and popularity is the raw member count (no
    log, unlike community concepts).
    """
    by_cluster: dict[int, list[str]] = {}
    for iid, cluster in assignment.members.items():
        by_cluster.setdefault(cluster, []).append(iid)

    concepts = []
    for cluster in sorted(by_cluster):
        members = sorted(by_cluster[cluster])
        counts: dict[str, int] = {}
        for iid in members:
            for tag, c in tag_counts.get(iid, {}).items():
                counts[tag] = counts.get(tag, 0) + c
        vector = TermVector.from_entries(counts).unit_sum()
        concepts.append(
            Concept(
                id=f"cluster{cluster}",
                label=vector.top_terms(LABEL_TERMS),
                vector=vector,
                popularity=float(len(members)),
                source={"kind": "cluster", "items": members},
                member_item_ids=frozenset(members),
                member_total=len(members),
            )
        )
    return concepts


def item_cluster_score(
    item_id: str, item_vector: TermVector | None, concept: Concept
) -> float:
    """Cosine to the cluster concept for members, exactly 0 for outsiders."""
    if item_id not in concept.member_item_ids:
        return 0.0
    if item_vector is None:
        return 0.0
    return cosine(item_vector, concept.vector)
