"""Corpus loading, validation, and summary statistics.

The on-disk corpus is two line-delimited JSON files: one tagged item per
line and one community per line. After loading, membership edges are
reconciled to the union of both directions so that item.communities and
community.item_ids always agree; the corpus is immutable from then on and
safe to share across query workers.
"""

from __future__ import annotations

import json
import time
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable


class CorpusError(Exception):
    """Unreadable file, malformed record, duplicate id, or broken reference."""


@dataclass
class TaggedItem:
    id: str
    title: str = ""
    description: str = ""
    tags: list[str] = field(default_factory=list)
    owner: str = ""
    communities: list[str] = field(default_factory=list)


@dataclass
class Community:
    id: str
    title: str = ""
    description: str = ""
    member_count: int = 0
    item_ids: list[str] = field(default_factory=list)


@dataclass
class Corpus:
    items: dict[str, TaggedItem]
    communities: dict[str, Community]
    provenance: dict = field(default_factory=dict)
    # Edges listed on only one side before reconciliation, as
    # (item_id, community_id, side-that-listed-it).
    membership_disagreements: list[tuple[str, str, str]] = field(default_factory=list)


@dataclass
class CorpusStats:
    item_count: int
    user_count: int
    community_count: int
    communities_per_item_histogram: dict[int, int]
    zero_community_fraction: float


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def normalize_tag(tag: str) -> str:
    """Lowercase, NFC-normalize, and trim; no stemming or stopword removal."""
    return unicodedata.normalize("NFC", str(tag)).strip().lower()


def normalize_tags(tags: Iterable[str]) -> list[str]:
    out = []
    for tag in tags:
        t = normalize_tag(tag)
        if t:
            out.append(t)
    return out


def make_corpus(
    items: Iterable[TaggedItem],
    communities: Iterable[Community],
    provenance: dict | None = None,
) -> Corpus:
    """Assemble a corpus from parsed records, reconciling membership edges.

    Raises CorpusError on duplicate or empty ids and on references to ids
    that do not exist on the other side. Tags are normalized here.
    """
    item_map: dict[str, TaggedItem] = {}
    for item in items:
        if not item.id:
            raise CorpusError("item with empty id")
        if item.id in item_map:
            raise CorpusError(f"duplicate item id {item.id!r}")
        item.tags = normalize_tags(item.tags)
        item_map[item.id] = item

    comm_map: dict[str, Community] = {}
    for comm in communities:
        if not comm.id:
            raise CorpusError("community with empty id")
        if comm.id in comm_map:
            raise CorpusError(f"duplicate community id {comm.id!r}")
        comm_map[comm.id] = comm

    for item in item_map.values():
        for cid in item.communities:
            if cid not in comm_map:
                raise CorpusError(
                    f"item {item.id!r} references unknown community {cid!r}"
                )
    for comm in comm_map.values():
        for iid in comm.item_ids:
            if iid not in item_map:
                raise CorpusError(
                    f"community {comm.id!r} references unknown item {iid!r}"
                )

    # Union-reconcile the two membership directions, remembering one-sided
    # edges so strict validation can surface them later.
    disagreements: list[tuple[str, str, str]] = []
    item_side = {(i.id, cid) for i in item_map.values() for cid in i.communities}
    comm_side = {(iid, c.id) for c in comm_map.values() for iid in c.item_ids}
    for iid, cid in sorted(item_side - comm_side):
        disagreements.append((iid, cid, "item"))
    for iid, cid in sorted(comm_side - item_side):
        disagreements.append((iid, cid, "community"))

    edges = item_side | comm_side
    for item in item_map.values():
        item.communities = sorted(cid for iid, cid in edges if iid == item.id)
    for comm in comm_map.values():
        comm.item_ids = sorted(iid for iid, cid in edges if cid == comm.id)

    return Corpus(
        items=item_map,
        communities=comm_map,
        provenance=provenance or {},
        membership_disagreements=disagreements,
    )


def _read_jsonl(path: str, kind: str) -> list[dict]:
    records = []
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusError(f"cannot read {kind} file {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(
                    f"{path}:{lineno}: malformed {kind} record: {exc.msg}"
                ) from exc
            if not isinstance(obj, dict):
                raise CorpusError(f"{path}:{lineno}: {kind} record is not an object")
            obj["_line"] = lineno
            records.append(obj)
    return records


def _parse_item(obj: dict, path: str) -> TaggedItem:
    lineno = obj.pop("_line")
    try:
        tags = obj.get("tags", [])
        comms = obj.get("communities", [])
        if not isinstance(tags, list) or not isinstance(comms, list):
            raise TypeError("tags and communities must be lists")
        return TaggedItem(
            id=str(obj["id"]),
            title=str(obj.get("title", "")),
            description=str(obj.get("description", "")),
            tags=[str(t) for t in tags],
            owner=str(obj.get("owner", "")),
            communities=[str(c) for c in comms],
        )
    except (KeyError, TypeError) as exc:
        raise CorpusError(f"{path}:{lineno}: malformed item record: {exc}") from exc


def _parse_community(obj: dict, path: str) -> Community:
    lineno = obj.pop("_line")
    try:
        item_ids = obj.get("item_ids", [])
        if not isinstance(item_ids, list):
            raise TypeError("item_ids must be a list")
        return Community(
            id=str(obj["id"]),
            title=str(obj.get("title", "")),
            description=str(obj.get("description", "")),
            member_count=int(obj.get("member_count", 0)),
            item_ids=[str(i) for i in item_ids],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpusError(
            f"{path}:{lineno}: malformed community record: {exc}"
        ) from exc


def load_corpus(items_path: str, communities_path: str) -> Corpus:
    items = [_parse_item(o, items_path) for o in _read_jsonl(items_path, "item")]
    communities = [
        _parse_community(o, communities_path)
        for o in _read_jsonl(communities_path, "community")
    ]
    provenance = {
        "items_path": str(items_path),
        "communities_path": str(communities_path),
        "loaded_at": time.time(),
    }
    return make_corpus(items, communities, provenance)


def save_corpus(corpus: Corpus, items_path: str, communities_path: str) -> None:
    with open(items_path, "w", encoding="utf-8") as fh:
        for iid in sorted(corpus.items):
            item = corpus.items[iid]
            fh.write(
                json.dumps(
                    {
                        "id": item.id,
                        "title": item.title,
                        "description": item.description,
                        "tags": item.tags,
                        "owner": item.owner,
                        "communities": item.communities,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    with open(communities_path, "w", encoding="utf-8") as fh:
        for cid in sorted(corpus.communities):
            comm = corpus.communities[cid]
            fh.write(
                json.dumps(
                    {
                        "id": comm.id,
                        "title": comm.title,
                        "description": comm.description,
                        "member_count": comm.member_count,
                        "item_ids": comm.item_ids,
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )


def corpus_stats(corpus: Corpus) -> CorpusStats:
    histogram: dict[int, int] = {}
    for item in corpus.items.values():
        n = len(item.communities)
        histogram[n] = histogram.get(n, 0) + 1
    item_count = len(corpus.items)
    owners = {i.owner for i in corpus.items.values() if i.owner}
    zero = histogram.get(0, 0)
    return CorpusStats(
        item_count=item_count,
        user_count=len(owners),
        community_count=len(corpus.communities),
        communities_per_item_histogram=histogram,
        zero_community_fraction=(zero / item_count) if item_count else 0.0,
    )


def validate(corpus: Corpus, strict: bool = False) -> ValidationReport:
    """List data violations; an empty report means the corpus is consistent.

    With strict=True, membership edges that were listed on only one side of
    the source files are also reported.
    """
    violations: list[str] = []
    for iid, item in corpus.items.items():
        if not iid or not item.id:
            violations.append(f"item with empty id (key {iid!r})")
        for cid in item.communities:
            if cid not in corpus.communities:
                violations.append(f"item {iid!r} lists unknown community {cid!r}")
    for cid, comm in corpus.communities.items():
        if not cid or not comm.id:
            violations.append(f"community with empty id (key {cid!r})")
        if comm.member_count < 0:
            violations.append(
                f"community {cid!r} has negative member_count {comm.member_count}"
            )
        for iid in comm.item_ids:
            if iid not in corpus.items:
                violations.append(f"community {cid!r} lists unknown item {iid!r}")
    if strict:
        for iid, cid, side in corpus.membership_disagreements:
            violations.append(
                f"membership edge ({iid!r}, {cid!r}) listed only on the {side} side"
            )
    return ValidationReport(violations)
