"""Read-only HTTP facade over a built index directory.

Endpoints: GET /search, /concepts, /stats, /healthz. All state is loaded
once at startup and never mutated, so any number of requests may run
concurrently. The CLI and this service build their payloads through the
same functions, keeping the two surfaces identical modulo envelope.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware

from .engine import SearchEngine
from .ranker import RankerConfig, SearchResult


def _hit_payload(engine: SearchEngine, hit) -> dict:
    item = engine.corpus.items.get(hit.item_id)
    return {
        "id": hit.item_id,
        "score": hit.score,
        "title": item.title if item else "",
        "tags": list(item.tags) if item else [],
        "concepts": [[cid, term] for cid, term in hit.contributing_concepts],
    }


def _group_payload(engine: SearchEngine, group) -> dict:
    items = []
    for iid, score in group.items:
        item = engine.corpus.items.get(iid)
        items.append(
            {
                "id": iid,
                "score": score,
                "title": item.title if item else "",
                "tags": list(item.tags) if item else [],
            }
        )
    return {
        "concept_id": group.concept_id,
        "label": list(group.label),
        "score": group.concept_score,
        "items": items,
    }


def search_payload(
    engine: SearchEngine,
    result: SearchResult,
    cfg: RankerConfig,
    grouped: bool,
    concept: str | None = None,
) -> dict:
    """The response body shared verbatim by HTTP and `search --json`.

    When a concept id is pinned, the flat hits become that concept's item
    list (drill-down view); both views still come from the single ranking
    pass inside the SearchResult.
    """
    from .ranker import RankedHit

    groups = result.groups
    hits = result.hits
    if concept is not None:
        match = [g for g in groups if g.concept_id == concept]
        if not match:
            raise KeyError(concept)
        groups = match
        hits = [RankedHit(iid, score, [(concept, score)]) for iid, score in match[0].items]
    return {
        "query": result.query.raw,
        "mode": result.mode,
        "k": cfg.k,
        "alpha": cfg.alpha,
        "lambda": cfg.lam,
        "top_concepts": cfg.top_concepts,
        "effective_alpha": result.effective_alpha,
        "total_candidates": result.total_candidates,
        "timing_ms": result.timing_ms,
        "hits": [_hit_payload(engine, h) for h in hits],
        "groups": [_group_payload(engine, g) for g in groups] if (grouped or concept) else None,
    }


def concepts_payload(engine: SearchEngine, raw_query: str, top: int) -> dict:
    matches = engine.concept_matches(raw_query, top)
    return {
        "query": raw_query,
        "concepts": [
            {
                "id": c.id,
                "label": list(c.label),
                "query_score": score,
                "popularity": c.popularity,
                "member_total": c.member_total,
                "member_items": len(c.member_item_ids),
            }
            for c, score in matches
        ],
    }


def stats_payload(engine: SearchEngine) -> dict:
    stats = engine.stats()
    return {
        "item_count": stats.item_count,
        "user_count": stats.user_count,
        "community_count": stats.community_count,
        "communities_per_item_histogram": {
            str(k): v for k, v in sorted(stats.communities_per_item_histogram.items())
        },
        "zero_community_fraction": stats.zero_community_fraction,
    }


def create_app(engine: SearchEngine) -> FastAPI:
    app = FastAPI(title="conceptsearch", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    app.state.engine = engine

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/stats")
    def stats():
        return stats_payload(engine)

    @app.get("/concepts")
    def concepts(q: str = Query(""), top: int = Query(5, ge=1)):
        if not q.strip():
            raise HTTPException(status_code=400, detail="q must be non-empty")
        try:
            return concepts_payload(engine, q, top)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))

    @app.get("/search")
    def search(
        q: str = Query(""),
        mode: str = Query("community"),
        k: int = Query(10),
        alpha: float = Query(1.0),
        lam: float = Query(0.5, alias="lambda"),
        top_concepts: int = Query(10),
        grouped: bool = Query(False),
        seed: int = Query(42),
        concept: str | None = Query(None),
    ):
        if not q.strip():
            raise HTTPException(status_code=400, detail="q must be non-empty")
        try:
            cfg = RankerConfig(
                mode=mode,
                lam=lam,
                alpha=alpha,
                top_concepts=top_concepts,
                k=k,
                seed=seed,
            )
            if concept is not None:
                cfg.group_size = k
            result = engine.search(q, cfg)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        try:
            return search_payload(engine, result, cfg, grouped, concept)
        except KeyError:
            raise HTTPException(
                status_code=404, detail=f"concept {concept!r} not in current results"
            )

    return app


def serve(index_dir: str, bind: str = "0.0.0.0:8080") -> None:
    """Load the index once and serve until interrupted."""
    import uvicorn

    engine = SearchEngine.load(index_dir)
    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(engine), host=host or "0.0.0.0", port=int(port))
