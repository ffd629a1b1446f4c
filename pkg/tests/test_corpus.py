import json
import random

import pytest

from conceptsearch import (
    Community,
    CorpusError,
    TaggedItem,
    corpus_stats,
    load_corpus,
    make_corpus,
    save_corpus,
    validate,
)
from conceptsearch.corpus import Corpus, normalize_tags

from conftest import mini_communities, mini_items, random_corpus


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec) + "\n")


def mini_files(tmp_path):
    items = tmp_path / "items.jsonl"
    comms = tmp_path / "communities.jsonl"
    write_jsonl(
        items,
        [
            {"id": i.id, "title": i.title, "description": i.description,
             "tags": i.tags, "owner": i.owner, "communities": i.communities}
            for i in mini_items()
        ],
    )
    write_jsonl(
        comms,
        [
            {"id": c.id, "title": c.title, "description": c.description,
             "member_count": c.member_count, "item_ids": c.item_ids}
            for c in mini_communities()
        ],
    )
    return str(items), str(comms)


def test_load_mini_fixture(tmp_path):
    items_path, comms_path = mini_files(tmp_path)
    corpus = load_corpus(items_path, comms_path)
    assert len(corpus.items) == 6
    assert len(corpus.communities) == 2
    # invariant reconciliation: both directions agree after load
    assert corpus.communities["g1"].item_ids == ["i1", "i2", "i3"]
    assert corpus.items["i4"].communities == ["g2"]


def test_load_empty_files(tmp_path):
    items = tmp_path / "items.jsonl"
    comms = tmp_path / "communities.jsonl"
    items.write_text("")
    comms.write_text("")
    corpus = load_corpus(str(items), str(comms))
    assert corpus.items == {} and corpus.communities == {}


def test_dangling_community_reference_names_id(tmp_path):
    items = tmp_path / "items.jsonl"
    comms = tmp_path / "communities.jsonl"
    write_jsonl(items, [{"id": "i1", "tags": ["a"], "communities": ["gX"]}])
    comms.write_text("")
    with pytest.raises(CorpusError, match="gX"):
        load_corpus(str(items), str(comms))


def test_duplicate_item_id_rejected(tmp_path):
    items = tmp_path / "items.jsonl"
    comms = tmp_path / "communities.jsonl"
    write_jsonl(items, [{"id": "i1", "tags": []}, {"id": "i1", "tags": []}])
    comms.write_text("")
    with pytest.raises(CorpusError, match="duplicate"):
        load_corpus(str(items), str(comms))


def test_malformed_record_reports_line_number(tmp_path):
    items = tmp_path / "items.jsonl"
    comms = tmp_path / "communities.jsonl"
    items.write_text('{"id": "i1", "tags": []}\nnot json at all\n')
    comms.write_text("")
    with pytest.raises(CorpusError, match=r":2:"):
        load_corpus(str(items), str(comms))


def test_missing_file_is_an_error(tmp_path):
    with pytest.raises(CorpusError):
        load_corpus(str(tmp_path / "nope.jsonl"), str(tmp_path / "alsono.jsonl"))


def test_membership_union_reconciliation():
    # Edge listed only on the community side still ends up on both.
    items = [TaggedItem(id="i1", tags=["a"]), TaggedItem(id="i2", tags=["b"], communities=["g1"])]
    comms = [Community(id="g1", member_count=3, item_ids=["i1"])]
    corpus = make_corpus(items, comms)
    assert corpus.items["i1"].communities == ["g1"]
    assert corpus.communities["g1"].item_ids == ["i1", "i2"]
    assert len(corpus.membership_disagreements) == 2
    assert validate(corpus).ok
    strict = validate(corpus, strict=True)
    assert len(strict.violations) == 2


def test_tag_normalization():
    items = [TaggedItem(id="i1", tags=["  Rose ", "JASMINE", "", "café"])]
    corpus = make_corpus(items, [])
    assert corpus.items["i1"].tags == ["rose", "jasmine", "café"]
    assert normalize_tags(["A", " ", "b"]) == ["a", "b"]


def test_stats_mini_fixture(mini_corpus):
    stats = corpus_stats(mini_corpus)
    assert stats.item_count == 6
    assert stats.community_count == 2
    assert stats.user_count == 4
    assert stats.zero_community_fraction == pytest.approx(2 / 6)
    assert stats.communities_per_item_histogram == {0: 2, 1: 4}


def test_stats_all_items_covered():
    items = [TaggedItem(id="i1", tags=["x"], communities=["g1"])]
    comms = [Community(id="g1", member_count=1)]
    stats = corpus_stats(make_corpus(items, comms))
    assert stats.zero_community_fraction == 0.0


def test_validate_clean_fixture(mini_corpus):
    assert validate(mini_corpus).ok


def test_validate_negative_member_count(mini_corpus):
    mini_corpus.communities["g1"].member_count = -1
    report = validate(mini_corpus)
    assert len(report.violations) == 1
    assert "member_count" in report.violations[0]


def test_validate_dangling_reference():
    # Assembled directly, bypassing make_corpus's own check.
    corpus = Corpus(
        items={"i1": TaggedItem(id="i1", communities=["ghost"])},
        communities={},
    )
    report = validate(corpus)
    assert len(report.violations) == 1
    assert "ghost" in report.violations[0]


def test_round_trip_stability(tmp_path):
    rng = random.Random(11)
    for trial in range(10):
        corpus = random_corpus(rng)
        ip = tmp_path / f"items{trial}.jsonl"
        cp = tmp_path / f"comms{trial}.jsonl"
        save_corpus(corpus, str(ip), str(cp))
        reloaded = load_corpus(str(ip), str(cp))
        assert reloaded.items == corpus.items
        assert reloaded.communities == corpus.communities


def test_histogram_totals_property():
    rng = random.Random(7)
    for _ in range(100):
        corpus = random_corpus(rng)
        stats = corpus_stats(corpus)
        assert sum(stats.communities_per_item_histogram.values()) == stats.item_count
        zero = stats.communities_per_item_histogram.get(0, 0)
        assert stats.zero_community_fraction == pytest.approx(zero / stats.item_count)
