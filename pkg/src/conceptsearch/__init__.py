"""Concept-driven tag search over community-shared media corpora."""

from .corpus import (
    Community,
    Corpus,
    CorpusError,
    CorpusStats,
    TaggedItem,
    corpus_stats,
    load_corpus,
    make_corpus,
    save_corpus,
    validate,
)
from .engine import EngineConfig, SearchEngine
from .index import ItemVectorIndex, QuerySpec, build_index, plain_search
from .ranker import ConceptGroup, RankedHit, RankerConfig, blend_alpha, rank, run_search
from .vectors import TermVector, cosine

__version__ = "0.1.0"

__all__ = [
    "Community",
    "ConceptGroup",
    "Corpus",
    "CorpusError",
    "CorpusStats",
    "EngineConfig",
    "ItemVectorIndex",
    "QuerySpec",
    "RankedHit",
    "RankerConfig",
    "SearchEngine",
    "TaggedItem",
    "TermVector",
    "blend_alpha",
    "build_index",
    "corpus_stats",
    "cosine",
    "load_corpus",
    "make_corpus",
    "plain_search",
    "rank",
    "run_search",
    "save_corpus",
    "validate",
    "__version__",
]
