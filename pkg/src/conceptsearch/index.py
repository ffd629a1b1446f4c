"""TF-IDF item vectors, the inverted index, and plain cosine search."""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

from .corpus import Corpus, normalize_tag
from .vectors import TermVector, cosine

DEFAULT_FIELDS = ("tags", "title", "description")

# Tags are atomic labels and are kept whole; free text is split on
# non-alphanumeric runs.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Tag occurrences count double relative to title/description tokens.
TAG_BOOST = 2.0


def tokenize(text: str) -> list[str]:
    return [normalize_tag(t) for t in _TOKEN_RE.findall(text.lower())]


@dataclass
class QuerySpec:
    raw: str
    terms: list[str]
    mode: str = "plain"
    k: int = 10
    alpha: float = 1.0
    top_concepts: int = 10

    MODES = ("plain", "cluster", "community")

    def __post_init__(self):
        if not self.terms:
            raise ValueError("query has no terms after normalization")
        if self.mode not in self.MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if self.top_concepts < 1:
            raise ValueError("top_concepts must be >= 1")

    @classmethod
    def parse(cls, raw: str, **kwargs) -> "QuerySpec":
        return cls(raw=raw, terms=tokenize(raw), **kwargs)


@dataclass
class ItemVectorIndex:
    vectors: dict[str, TermVector]
    postings: dict[str, list[str]]
    doc_freq: dict[str, int]
    item_count: int
    # Raw per-item tag counts, kept for concept building (community and
    # cluster vectors aggregate plain tag counts, not TF-IDF weights).
    tag_counts: dict[str, dict[str, int]] = field(default_factory=dict)
    fields: tuple[str, ...] = DEFAULT_FIELDS


def _item_term_counts(item, fields) -> dict[str, float]:
    counts: dict[str, float] = {}
    if "tags" in fields:
        for tag in item.tags:
            counts[tag] = counts.get(tag, 0.0) + TAG_BOOST
    for fld in ("title", "description"):
        if fld in fields:
            for tok in tokenize(getattr(item, fld)):
                counts[tok] = counts.get(tok, 0.0) + 1.0
    return counts


def idf(item_count: int, doc_freq: int) -> float:
    return math.log(item_count / doc_freq) + 1.0


def build_index(corpus: Corpus, fields: tuple[str, ...] = DEFAULT_FIELDS) -> ItemVectorIndex:
    """Build TF-IDF vectors and postings; weight(t) = tf(t) * (ln(N/df)+1)."""
    raw: dict[str, dict[str, float]] = {}
    doc_freq: dict[str, int] = {}
    tag_counts: dict[str, dict[str, int]] = {}
    for iid in sorted(corpus.items):
        item = corpus.items[iid]
        counts = _item_term_counts(item, fields)
        raw[iid] = counts
        for term in counts:
            doc_freq[term] = doc_freq.get(term, 0) + 1
        tag_counts[iid] = dict(Counter(item.tags))

    n = len(corpus.items)
    vectors: dict[str, TermVector] = {}
    postings: dict[str, list[str]] = {}
    for iid, counts in raw.items():
        weighted = {t: tf * idf(n, doc_freq[t]) for t, tf in counts.items()}
        vectors[iid] = TermVector.from_entries(weighted)
        for term in counts:
            postings.setdefault(term, []).append(iid)
    for term in postings:
        postings[term].sort()

    return ItemVectorIndex(
        vectors=vectors,
        postings=postings,
        doc_freq=doc_freq,
        item_count=n,
        tag_counts=tag_counts,
        fields=tuple(fields),
    )


def query_vector(index: ItemVectorIndex, query: QuerySpec) -> TermVector:
    """IDF-weighted query vector; terms absent from the corpus are dropped."""
    counts = Counter(t for t in query.terms if t in index.doc_freq)
    return TermVector.from_entries(
        {t: tf * idf(index.item_count, index.doc_freq[t]) for t, tf in counts.items()}
    )


def query_matches(index: ItemVectorIndex, query: QuerySpec) -> list[str]:
    """Sorted ids of items matching at least one query term."""
    ids: set[str] = set()
    for term in query.terms:
        ids.update(index.postings.get(term, ()))
    return sorted(ids)


def plain_search(
    index: ItemVectorIndex, query: QuerySpec, k: int
) -> list[tuple[str, float]]:
    """Baseline TF-IDF cosine ranking over inverted-index candidates.

    Ties break by ascending item id so identical inputs always produce
    identical output.
    """
    qvec = query_vector(index, query)
    if not qvec:
        return []
    scored = [
        (iid, cosine(qvec, index.vectors[iid])) for iid in query_matches(index, query)
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]
