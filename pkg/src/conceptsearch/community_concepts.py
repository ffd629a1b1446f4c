"""Community tag-probability vectors and their merger into concepts.

Communities sharing near-identical tag distributions collapse into a
single concept whose popularity comes from the log of the combined member
count; everything here runs offline at index-build time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Community
from .index import ItemVectorIndex, QuerySpec
from .vectors import TermVector, cosine

DEFAULT_SIM_THRESHOLD = 0.9
LABEL_TERMS = 3


@dataclass
class CommunityVector:
    """A community's aggregated tag distribution (weights sum to 1)."""

    community_id: str
    vector: TermVector
    raw_tag_total: int
    image_count: int
    member_count: int
    item_ids: frozenset[str] = frozenset()


@dataclass
class Concept:
    id: str
    label: list[str]
    vector: TermVector
    popularity: float
    source: dict
    member_item_ids: frozenset[str]
    # Combined community member count behind the popularity score; used by
    # the ranker's minimum-popularity floor. Cluster concepts store their
    # cluster size here.
    member_total: int = 0


def trim_low_frequency(raw_counts: Mapping[str, int]) -> dict[str, int]:
    """Drop terms whose count falls below mean - 2 * (population) stddev.

    On heavy-tailed counts the threshold is usually negative, so nothing
    is removed; that is the intended literal behavior. Never empties a
    nonempty input.
    """
    if not raw_counts:
        return {}
    values = list(raw_counts.values())
    mean = sum(values) / len(values)
    var = sum((v - mean) ** 2 for v in values) / len(values)
    threshold = mean - 2.0 * math.sqrt(var)
    kept = {t: c for t, c in raw_counts.items() if c >= threshold}
    if not kept:
        return dict(raw_counts)
    return kept


def build_community_vector(
    community: Community, index: ItemVectorIndex
) -> CommunityVector:
    """Aggregate raw tag counts over the community pool, trim outlier-low
    terms, and normalize to a probability distribution.

    Communities with empty pools (or all-untagged pools) get an empty
    vector and are excluded from concept merging by the caller.
    """
    counts: dict[str, int] = {}
    pool = set(community.item_ids)
    for iid in pool:
        for tag, c in index.tag_counts.get(iid, {}).items():
            counts[tag] = counts.get(tag, 0) + c
    raw_total = sum(counts.values())
    trimmed = trim_low_frequency(counts)
    vector = TermVector.from_entries(trimmed).unit_sum()
    return CommunityVector(
        community_id=community.id,
        vector=vector,
        raw_tag_total=raw_total,
        image_count=len(pool),
        member_count=community.member_count,
        item_ids=frozenset(pool),
    )


def merge_communities(
    vectors: Sequence[CommunityVector],
    sim_threshold: float = DEFAULT_SIM_THRESHOLD,
) -> list[Concept]:
    """Deterministic leader clustering of community vectors into concepts.

    Communities are processed in descending member_count (ties by id); each
    joins the first concept whose leader it matches at cosine >=
    sim_threshold, else founds a new concept. A merged concept's vector is
    the image-count-weighted average of its members, re-normalized; its
    popularity is ln(1 + combined member count).
    """
    usable = [cv for cv in vectors if cv.vector]
    order = sorted(usable, key=lambda cv: (-cv.member_count, cv.community_id))
    groups: list[list[CommunityVector]] = []
    for cv in order:
        for group in groups:
            if cosine(group[0].vector, cv.vector) >= sim_threshold:
                group.append(cv)
                break
        else:
            groups.append([cv])

    concepts = []
    for idx, group in enumerate(groups):
        total_images = sum(cv.image_count for cv in group)
        weights = {cv.community_id: cv.image_count / total_images for cv in group}
        merged: dict[str, float] = {}
        for cv in group:
            w = weights[cv.community_id]
            for term, value in cv.vector.entries.items():
                merged[term] = merged.get(term, 0.0) + w * value
        vector = TermVector.from_entries(merged).unit_sum()
        member_total = sum(cv.member_count for cv in group)
        members = frozenset().union(*(cv.item_ids for cv in group))
        concepts.append(
            Concept(
                id=f"c{idx:03d}",
                label=vector.top_terms(LABEL_TERMS),
                vector=vector,
                popularity=math.log1p(member_total),
                source={"kind": "community", "weights": weights},
                member_item_ids=members,
                member_total=member_total,
            )
        )
    return concepts


def concept_query_score(concept: Concept, query: QuerySpec) -> float:
    """Query-to-concept relevance: cosine against a unit-weight query vector."""
    return cosine(concept.vector, TermVector.unit_terms(query.terms))


def item_concept_score(
    item_id: str,
    item_vector: TermVector | None,
    concept: Concept,
    lam: float = 0.5,
) -> float:
    """Mix of community membership and item-to-concept cosine similarity.

    score = lam * membership + (1 - lam) * cosine; membership is 1.0 iff
    the item belongs to any community merged into the concept.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must be in [0, 1]")
    membership = 1.0 if item_id in concept.member_item_ids else 0.0
    sim = cosine(item_vector, concept.vector) if item_vector is not None else 0.0
    return lam * membership + (1.0 - lam) * sim


def candidate_items(
    concept: Concept, index: ItemVectorIndex, query: QuerySpec
) -> set[str]:
    """Pool members plus every inverted-index match for the query terms."""
    ids = set(concept.member_item_ids)
    for term in query.terms:
        ids.update(index.postings.get(term, ()))
    return ids
