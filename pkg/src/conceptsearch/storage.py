"""On-disk layout of a built index directory.

    INDEXDIR/
      manifest.json      version header, build config, source provenance
      items.jsonl        normalized corpus (round-trips through load_corpus)
      communities.jsonl
      index.json         TF-IDF vectors, postings, doc freqs, raw tag counts
      concepts.json      community vectors and merged concepts

Everything is UTF-8 JSON; the manifest's format_version gates loading.
"""

from __future__ import annotations

import json
import time
from pathlib import Path

from .community_concepts import CommunityVector, Concept
from .corpus import Corpus, load_corpus, save_corpus
from .index import ItemVectorIndex
from .vectors import TermVector

FORMAT_VERSION = 1


class StorageError(Exception):
    pass


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False)


def _read_json(path: Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise StorageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StorageError(f"corrupt JSON in {path}: {exc}") from exc


def save_index_dir(
    index_dir: str,
    corpus: Corpus,
    index: ItemVectorIndex,
    community_vectors: list[CommunityVector],
    concepts: list[Concept],
    config: dict,
) -> None:
    root = Path(index_dir)
    root.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, str(root / "items.jsonl"), str(root / "communities.jsonl"))
    _write_json(
        root / "manifest.json",
        {
            "format_version": FORMAT_VERSION,
            "created_at": time.time(),
            "source": corpus.provenance,
            "config": config,
            "item_count": len(corpus.items),
            "community_count": len(corpus.communities),
            "concept_count": len(concepts),
        },
    )
    _write_json(
        root / "index.json",
        {
            "format_version": FORMAT_VERSION,
            "item_count": index.item_count,
            "fields": list(index.fields),
            "vectors": {iid: vec.entries for iid, vec in index.vectors.items()},
            "postings": index.postings,
            "doc_freq": index.doc_freq,
            "tag_counts": index.tag_counts,
        },
    )
    _write_json(
        root / "concepts.json",
        {
            "format_version": FORMAT_VERSION,
            "community_vectors": [
                {
                    "community_id": cv.community_id,
                    "vector": cv.vector.entries,
                    "raw_tag_total": cv.raw_tag_total,
                    "image_count": cv.image_count,
                    "member_count": cv.member_count,
                    "item_ids": sorted(cv.item_ids),
                }
                for cv in community_vectors
            ],
            "concepts": [
                {
                    "id": c.id,
                    "label": c.label,
                    "vector": c.vector.entries,
                    "popularity": c.popularity,
                    "source": c.source,
                    "member_item_ids": sorted(c.member_item_ids),
                    "member_total": c.member_total,
                }
                for c in concepts
            ],
        },
    )


def _check_version(payload: dict, path: Path) -> None:
    version = payload.get("format_version")
    if version != FORMAT_VERSION:
        raise StorageError(
            f"{path}: format_version {version!r} unsupported (expected {FORMAT_VERSION})"
        )


def load_index_dir(
    index_dir: str,
) -> tuple[Corpus, ItemVectorIndex, list[CommunityVector], list[Concept], dict]:
    root = Path(index_dir)
    if not root.is_dir():
        raise StorageError(f"index directory {index_dir} does not exist")
    manifest = _read_json(root / "manifest.json")
    _check_version(manifest, root / "manifest.json")
    corpus = load_corpus(str(root / "items.jsonl"), str(root / "communities.jsonl"))

    raw_index = _read_json(root / "index.json")
    _check_version(raw_index, root / "index.json")
    index = ItemVectorIndex(
        vectors={
            iid: TermVector.from_entries(entries)
            for iid, entries in raw_index["vectors"].items()
        },
        postings=raw_index["postings"],
        doc_freq=raw_index["doc_freq"],
        item_count=raw_index["item_count"],
        tag_counts=raw_index["tag_counts"],
        fields=tuple(raw_index["fields"]),
    )

    raw_concepts = _read_json(root / "concepts.json")
    _check_version(raw_concepts, root / "concepts.json")
    community_vectors = [
        CommunityVector(
            community_id=cv["community_id"],
            vector=TermVector.from_entries(cv["vector"]),
            raw_tag_total=cv["raw_tag_total"],
            image_count=cv["image_count"],
            member_count=cv["member_count"],
            item_ids=frozenset(cv["item_ids"]),
        )
        for cv in raw_concepts["community_vectors"]
    ]
    concepts = [
        Concept(
            id=c["id"],
            label=c["label"],
            vector=TermVector.from_entries(c["vector"]),
            popularity=c["popularity"],
            source=c["source"],
            member_item_ids=frozenset(c["member_item_ids"]),
            member_total=c["member_total"],
        )
        for c in raw_concepts["concepts"]
    ]
    return corpus, index, community_vectors, concepts, manifest
