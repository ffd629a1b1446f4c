"""The loaded search engine: corpus + index + concept store in one place.

Built offline from a corpus, persisted to an index directory, and then
shared immutably by the CLI, the evaluation harness, and the HTTP service.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .community_concepts import (
    CommunityVector,
    Concept,
    build_community_vector,
    concept_query_score,
    merge_communities,
)
from .corpus import Corpus, CorpusStats, corpus_stats
from .index import DEFAULT_FIELDS, ItemVectorIndex, QuerySpec, build_index
from .ranker import RankerConfig, SearchResult, run_search
from . import storage


@dataclass
class EngineConfig:
    fields: tuple[str, ...] = DEFAULT_FIELDS
    sim_threshold: float = 0.9

    def as_dict(self) -> dict:
        return {"fields": list(self.fields), "sim_threshold": self.sim_threshold}


@dataclass
class SearchEngine:
    corpus: Corpus
    index: ItemVectorIndex
    community_vectors: list[CommunityVector]
    concepts: list[Concept]
    config: EngineConfig = field(default_factory=EngineConfig)

    @classmethod
    def build(cls, corpus: Corpus, config: EngineConfig | None = None) -> "SearchEngine":
        """Offline build: TF-IDF index, community vectors, merged concepts."""
        config = config or EngineConfig()
        index = build_index(corpus, config.fields)
        vectors = [
            build_community_vector(comm, index)
            for _, comm in sorted(corpus.communities.items())
        ]
        concepts = merge_communities(vectors, config.sim_threshold)
        return cls(corpus, index, vectors, concepts, config)

    def save(self, index_dir: str) -> None:
        storage.save_index_dir(
            index_dir,
            self.corpus,
            self.index,
            self.community_vectors,
            self.concepts,
            self.config.as_dict(),
        )

    @classmethod
    def load(cls, index_dir: str) -> "SearchEngine":
        corpus, index, vectors, concepts, manifest = storage.load_index_dir(index_dir)
        cfg = manifest.get("config", {})
        config = EngineConfig(
            fields=tuple(cfg.get("fields", DEFAULT_FIELDS)),
            sim_threshold=cfg.get("sim_threshold", 0.9),
        )
        return cls(corpus, index, vectors, concepts, config)

    def search(self, raw_query: str, cfg: RankerConfig) -> SearchResult:
        query = QuerySpec.parse(
            raw_query,
            mode=cfg.mode,
            k=cfg.k,
            alpha=cfg.alpha,
            top_concepts=cfg.top_concepts,
        )
        return run_search(self.index, self.concepts, query, cfg)

    def concept_matches(self, raw_query: str, top: int = 5) -> list[tuple[Concept, float]]:
        """Community concepts relevant to the query, best first."""
        query = QuerySpec.parse(raw_query)
        scored = [
            (c, concept_query_score(c, query))
            for c in self.concepts
        ]
        scored = [(c, s) for c, s in scored if s > 0.0]
        scored.sort(key=lambda pair: (-pair[1] * pair[0].popularity, pair[0].id))
        return scored[:top]

    def stats(self) -> CorpusStats:
        return corpus_stats(self.corpus)
