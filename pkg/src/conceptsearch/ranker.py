"""Concept-driven ranking.

An item's score is the sum, over the query's top concepts, of
(query-to-concept relevance) * (concept popularity) * (item-to-concept
relevance). The query-probability normalizer is a rank-constant and is
dropped. A fraction alpha of the top-N result slots is reserved for
concept-driven hits; the rest fall back to plain TF-IDF search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from . import cluster_concepts
from .community_concepts import (
    Concept,
    candidate_items,
    concept_query_score,
    item_concept_score,
)
from .index import ItemVectorIndex, QuerySpec, plain_search, query_matches
from .cluster_concepts import item_cluster_score


@dataclass
class RankerConfig:
    mode: str = "community"  # plain | cluster | community
    lam: float = 0.5  # membership/similarity mix for community scoring
    alpha: float = 1.0  # slot fraction reserved for concept-driven hits
    top_concepts: int = 10
    k: int = 10
    # Concepts whose combined community member count falls below this floor
    # do not count as usable; when none pass, alpha drops to 0 for the
    # query (plain fallback). Cluster concepts are exempt.
    member_floor: int = 10
    # Cluster-mode knobs.
    clusters: int = 5
    lsi_rank: int = 50
    seed: int = 42
    max_cluster_candidates: int = 1000
    group_size: int = 5

    def __post_init__(self):
        if self.mode not in ("plain", "cluster", "community"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must be in [0, 1]")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.top_concepts < 1 or self.k < 1:
            raise ValueError("top_concepts and k must be >= 1")


@dataclass
class RankedHit:
    item_id: str
    score: float
    # (concept id, that concept's full term of the ranking sum).
    contributing_concepts: list[tuple[str, float]] = field(default_factory=list)


@dataclass
class ConceptGroup:
    concept_id: str
    label: list[str]
    concept_score: float  # relevance * popularity, query-dependent
    items: list[tuple[str, float]]  # (item id, item-to-concept score), desc


def select_concepts(
    query: QuerySpec, concepts: list[Concept], cfg: RankerConfig
) -> list[tuple[Concept, float]]:
    """Top-M concepts by query relevance * popularity.

    Concepts with zero query relevance are dropped entirely; ties break by
    concept id. Returns (concept, combined weight) pairs.
    """
    weighted = []
    for concept in concepts:
        rel = concept_query_score(concept, query)
        if rel > 0.0:
            weighted.append((concept, rel * concept.popularity))
    weighted.sort(key=lambda pair: (-pair[1], pair[0].id))
    return weighted[: cfg.top_concepts]


def _relevance(item_id, vec, concept, cfg) -> float:
    if cfg.mode == "cluster":
        return item_cluster_score(item_id, vec, concept)
    return item_concept_score(item_id, vec, concept, cfg.lam)


def _candidates_for(concept, index, query, cfg) -> set[str]:
    if cfg.mode == "cluster":
        return set(concept.member_item_ids)
    return candidate_items(concept, index, query)


def rank(
    query: QuerySpec,
    concepts: list[Concept],
    cfg: RankerConfig,
    index: ItemVectorIndex,
) -> list[RankedHit]:
    """Score all candidate items by the concept-driven sum.

    Candidates are the union of each selected concept's candidate set
    (pool members plus query matches in community mode, cluster members
    only in cluster mode). Hits with an exactly zero score are dropped.
    """
    selected = select_concepts(query, concepts, cfg)
    if not selected:
        return []
    candidates: set[str] = set()
    for concept, _ in selected:
        candidates |= _candidates_for(concept, index, query, cfg)

    hits = []
    for iid in sorted(candidates):
        vec = index.vectors.get(iid)
        contribs = []
        for concept, weight in selected:
            term = weight * _relevance(iid, vec, concept, cfg)
            if term != 0.0:
                contribs.append((concept.id, term))
        score = sum(term for _, term in contribs)
        if score > 0.0:
            hits.append(RankedHit(iid, score, contribs))
    hits.sort(key=lambda h: (-h.score, h.item_id))
    return hits


def blend_alpha(
    concept_hits: list[RankedHit],
    plain_hits: list[RankedHit],
    alpha: float,
    n: int,
) -> list[RankedHit]:
    """Reserve ceil(alpha * n) slots for concept hits, fill the rest from
    plain hits (skipping duplicates), and backfill across lists when one
    runs short. Preserves each list's internal order."""
    quota = math.ceil(alpha * n)
    out: list[RankedHit] = []
    seen: set[str] = set()
    for hit in concept_hits[:quota]:
        if hit.item_id not in seen:
            out.append(hit)
            seen.add(hit.item_id)
    for hit in plain_hits:
        if len(out) >= n:
            break
        if hit.item_id not in seen:
            out.append(hit)
            seen.add(hit.item_id)
    for hit in concept_hits[quota:]:
        if len(out) >= n:
            break
        if hit.item_id not in seen:
            out.append(hit)
            seen.add(hit.item_id)
    return out[:n]


def group_by_concept(
    query: QuerySpec,
    concepts: list[Concept],
    cfg: RankerConfig,
    index: ItemVectorIndex,
) -> list[ConceptGroup]:
    """Concept-bucketed view: top-M concepts, each with its best items."""
    groups = []
    for concept, weight in select_concepts(query, concepts, cfg):
        scored = []
        for iid in sorted(_candidates_for(concept, index, query, cfg)):
            rel = _relevance(iid, index.vectors.get(iid), concept, cfg)
            if rel > 0.0:
                scored.append((iid, rel))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        groups.append(
            ConceptGroup(
                concept_id=concept.id,
                label=list(concept.label),
                concept_score=weight,
                items=scored[: cfg.group_size],
            )
        )
    return groups


@dataclass
class SearchResult:
    query: QuerySpec
    mode: str
    hits: list[RankedHit]
    groups: list[ConceptGroup]
    total_candidates: int
    effective_alpha: float
    concepts: list[tuple[Concept, float]]  # selected (concept, weight) pairs
    timing_ms: float = 0.0


def build_query_concepts(
    index: ItemVectorIndex, query: QuerySpec, cfg: RankerConfig
) -> list[Concept]:
    """Cluster the query's matching items into concepts (cluster mode).

    Matches are capped at cfg.max_cluster_candidates by TF-IDF score before
    the latent-space projection.
    """
    matches = query_matches(index, query)
    if not matches:
        return []
    if len(matches) > cfg.max_cluster_candidates:
        top = plain_search(index, query, cfg.max_cluster_candidates)
        matches = sorted(iid for iid, _ in top)
    vectors = {iid: index.vectors[iid] for iid in matches}
    r = max(1, min(cfg.lsi_rank, len(matches) - 1, len(index.doc_freq)))
    space = cluster_concepts.lsi_project(vectors, r)
    k = min(cfg.clusters, len(matches))
    assignment = cluster_concepts.kmeans(space.doc_coords, k, cfg.seed)
    counts = {iid: index.tag_counts.get(iid, {}) for iid in matches}
    return cluster_concepts.clusters_to_concepts(assignment, counts)


def effective_alpha(cfg: RankerConfig, selected: list[tuple[Concept, float]]) -> float:
    """Static alpha, except it collapses to 0 in community mode when no
    selected concept clears the member-count floor."""
    if cfg.mode != "community":
        return cfg.alpha
    if any(c.member_total >= cfg.member_floor for c, _ in selected):
        return cfg.alpha
    return 0.0


def run_search(
    index: ItemVectorIndex,
    community: list[Concept],
    query: QuerySpec,
    cfg: RankerConfig,
) -> SearchResult:
    """Single ranking pass shared by the CLI and the HTTP service.

    Flat hits and concept groups come from the same concept selection, so
    the two views can never diverge.
    """
    t0 = time.perf_counter()
    # 2k plain hits guarantee enough unique fill items after deduplication.
    plain_pairs = plain_search(index, query, 2 * cfg.k)
    plain_hits = [RankedHit(iid, score) for iid, score in plain_pairs]

    if cfg.mode == "plain":
        result = SearchResult(
            query=query,
            mode=cfg.mode,
            hits=plain_hits[: cfg.k],
            groups=[],
            total_candidates=len(query_matches(index, query)),
            effective_alpha=0.0,
            concepts=[],
        )
        result.timing_ms = (time.perf_counter() - t0) * 1000.0
        return result

    concepts = (
        community
        if cfg.mode == "community"
        else build_query_concepts(index, query, cfg)
    )
    selected = select_concepts(query, concepts, cfg)
    concept_hits = rank(query, concepts, cfg, index)
    groups = group_by_concept(query, concepts, cfg, index)
    alpha = effective_alpha(cfg, selected)
    hits = blend_alpha(concept_hits, plain_hits, alpha, cfg.k)

    candidates: set[str] = set(query_matches(index, query))
    for concept, _ in selected:
        candidates |= _candidates_for(concept, index, query, cfg)

    result = SearchResult(
        query=query,
        mode=cfg.mode,
        hits=hits,
        groups=groups,
        total_candidates=len(candidates),
        effective_alpha=alpha,
        concepts=selected,
    )
    result.timing_ms = (time.perf_counter() - t0) * 1000.0
    return result
