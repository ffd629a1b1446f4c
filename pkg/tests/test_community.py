import math
import random

import pytest

from conceptsearch import Community, TaggedItem, build_index, make_corpus
from conceptsearch.community_concepts import (
    CommunityVector,
    build_community_vector,
    candidate_items,
    concept_query_score,
    item_concept_score,
    merge_communities,
    trim_low_frequency,
)
from conceptsearch.index import QuerySpec
from conceptsearch.vectors import TermVector, cosine

from conftest import random_corpus


def make_cv(cid, entries, member_count, image_count=1, item_ids=()):
    return CommunityVector(
        community_id=cid,
        vector=TermVector.from_entries(entries).unit_sum(),
        raw_tag_total=sum(entries.values()),
        image_count=image_count,
        member_count=member_count,
        item_ids=frozenset(item_ids),
    )


# --- community vectors -----------------------------------------------------


def test_flowers_community_vector(mini_corpus):
    index = build_index(mini_corpus)
    cv = build_community_vector(mini_corpus.communities["g1"], index)
    assert cv.raw_tag_total == 7
    assert cv.image_count == 3
    assert cv.member_count == 100
    assert abs(cv.vector.weight_sum() - 1.0) < 1e-9
    assert cv.vector.get("jasmine") == pytest.approx(2 / 7)
    assert cv.vector.get("flower") == pytest.approx(2 / 7)
    assert cv.vector.get("white") == pytest.approx(1 / 7)


def test_single_item_single_tag_community():
    corpus = make_corpus(
        [TaggedItem(id="i1", tags=["only"], communities=["g1"])],
        [Community(id="g1", member_count=2)],
    )
    index = build_index(corpus)
    cv = build_community_vector(corpus.communities["g1"], index)
    assert cv.vector.entries == {"only": 1.0}


def test_identical_tags_symmetry():
    items = [
        TaggedItem(id=f"i{n}", tags=["sun", "sea"], communities=["g1"]) for n in range(4)
    ]
    corpus = make_corpus(items, [Community(id="g1", member_count=9)])
    index = build_index(corpus)
    cv = build_community_vector(corpus.communities["g1"], index)
    assert cv.vector.get("sun") == pytest.approx(0.5)
    assert cv.vector.get("sea") == pytest.approx(0.5)


def test_empty_pool_community():
    corpus = make_corpus(
        [TaggedItem(id="i1", tags=["x"])], [Community(id="g1", member_count=5)]
    )
    index = build_index(corpus)
    cv = build_community_vector(corpus.communities["g1"], index)
    assert not cv.vector
    assert cv.image_count == 0
    # and it never becomes a concept
    assert merge_communities([cv]) == []


# --- trimming ---------------------------------------------------------------


def test_trim_all_equal_counts_kept():
    counts = {"a": 5, "b": 5, "c": 5}
    assert trim_low_frequency(counts) == counts


def test_trim_heavy_tail_keeps_everything():
    # mean 67, population stddev ~46.7 -> threshold ~ -26.4
    counts = {"a": 100, "b": 100, "c": 1}
    assert trim_low_frequency(counts) == counts


def test_trim_empty():
    assert trim_low_frequency({}) == {}


def test_trim_actually_trims_low_outlier():
    counts = {f"t{n}": 10 for n in range(9)}
    counts["runt"] = 1
    # mean 9.1, population stddev 2.7 -> threshold 3.7
    trimmed = trim_low_frequency(counts)
    assert "runt" not in trimmed
    assert len(trimmed) == 9


# --- merging ----------------------------------------------------------------


def test_merge_identical_vectors():
    a = make_cv("g1", {"x": 2.0, "y": 2.0}, member_count=50, image_count=4, item_ids=["i1"])
    b = make_cv("g2", {"x": 1.0, "y": 1.0}, member_count=30, image_count=2, item_ids=["i2"])
    concepts = merge_communities([a, b])
    assert len(concepts) == 1
    c = concepts[0]
    assert c.vector.get("x") == pytest.approx(0.5)
    assert c.popularity == pytest.approx(math.log(81))
    assert c.member_item_ids == {"i1", "i2"}
    assert c.source["weights"] == {"g1": 4 / 6, "g2": 2 / 6}


def test_merge_disjoint_supports():
    a = make_cv("g1", {"x": 1.0}, member_count=10)
    b = make_cv("g2", {"y": 1.0}, member_count=10)
    assert len(merge_communities([a, b])) == 2


def test_merge_mini_fixture(mini_corpus):
    index = build_index(mini_corpus)
    vectors = [
        build_community_vector(comm, index)
        for comm in mini_corpus.communities.values()
    ]
    g1, g2 = (cv for cv in sorted(vectors, key=lambda v: v.community_id))
    assert cosine(g1.vector, g2.vector) < 0.9
    concepts = merge_communities(vectors)
    assert len(concepts) == 2
    flowers = next(c for c in concepts if "flower" in c.label)
    pets = next(c for c in concepts if "dog" in c.label)
    assert flowers.popularity == pytest.approx(math.log(101), abs=1e-12)
    assert pets.popularity == pytest.approx(math.log(6), abs=1e-12)
    # larger community leads, so it founds the first concept
    assert concepts[0] is flowers


def test_merge_partition_and_leader_criterion():
    rng = random.Random(5)
    for _ in range(20):
        corpus = random_corpus(rng)
        index = build_index(corpus)
        vectors = [
            build_community_vector(c, index) for c in corpus.communities.values()
        ]
        usable = [cv for cv in vectors if cv.vector]
        concepts = merge_communities(vectors)
        merged_ids = [cid for c in concepts for cid in c.source["weights"]]
        assert sorted(merged_ids) == sorted(cv.community_id for cv in usable)
        by_id = {cv.community_id: cv for cv in usable}
        for concept in concepts:
            weights = concept.source["weights"]
            # leader is the first-processed member: highest member_count, id tiebreak
            leader = sorted(
                weights, key=lambda cid: (-by_id[cid].member_count, cid)
            )[0]
            for cid in weights:
                assert cosine(by_id[leader].vector, by_id[cid].vector) >= 0.9 - 1e-12
            assert abs(concept.vector.weight_sum() - 1.0) < 1e-9


def test_merge_weighted_average_by_image_count():
    a = make_cv("g1", {"x": 1.0}, member_count=20, image_count=3)
    b = make_cv("g2", {"x": 8.0, "y": 2.0}, member_count=10, image_count=1)
    concepts = merge_communities([a, b], sim_threshold=0.7)
    assert len(concepts) == 1
    vec = concepts[0].vector
    assert vec.get("x") == pytest.approx(0.75 * 1.0 + 0.25 * 0.8)
    assert vec.get("y") == pytest.approx(0.25 * 0.2)


# --- scoring ----------------------------------------------------------------


def concept_of(entries, members=()):
    vec = TermVector.from_entries(entries).unit_sum()
    return merge_communities(
        [
            CommunityVector(
                community_id="g",
                vector=vec,
                raw_tag_total=1,
                image_count=1,
                member_count=1,
                item_ids=frozenset(members),
            )
        ]
    )[0]


def test_concept_query_score_half_jasmine():
    concept = concept_of({"jasmine": 0.5, "dog": 0.5})
    score = concept_query_score(concept, QuerySpec.parse("jasmine"))
    assert score == pytest.approx(1 / math.sqrt(2), abs=1e-9)


def test_concept_query_score_absent_term():
    concept = concept_of({"dog": 1.0})
    assert concept_query_score(concept, QuerySpec.parse("jasmine")) == 0.0


def test_concept_query_score_parallel_is_one():
    # a unit-weight query is parallel to a uniform concept on the same support
    uniform = concept_of({"a": 1.0, "b": 1.0})
    assert concept_query_score(uniform, QuerySpec.parse("a b")) == pytest.approx(1.0)


def test_item_concept_score_direct_substitution():
    concept = concept_of({"a": 1.0}, members=["i1"])
    vec = TermVector.from_entries({"a": 3.0, "b": 4.0})  # cosine 0.6 to concept
    assert item_concept_score("i1", vec, concept, 0.5) == pytest.approx(0.8)


def test_item_concept_score_nonmember_zero():
    concept = concept_of({"a": 1.0}, members=["i1"])
    vec = TermVector.from_entries({"z": 1.0})
    assert item_concept_score("other", vec, concept, 0.5) == 0.0


def test_item_concept_score_lambda_zero_is_cosine():
    concept = concept_of({"a": 1.0}, members=["i1"])
    vec = TermVector.from_entries({"a": 3.0, "b": 4.0})
    assert item_concept_score("i1", vec, concept, 0.0) == pytest.approx(0.6)
    assert item_concept_score("anon", vec, concept, 0.0) == pytest.approx(0.6)


def test_item_concept_score_bounds_and_monotonicity():
    concept = concept_of({"a": 1.0, "b": 1.0}, members=["m"])
    member_vec = TermVector.from_entries({"a": 1.0})
    stranger_vec = TermVector.from_entries({"a": 1.0, "c": 2.0})
    lams = [0.0, 0.2, 0.5, 0.8, 1.0]
    member_scores = [item_concept_score("m", member_vec, concept, lam) for lam in lams]
    stranger_scores = [item_concept_score("s", stranger_vec, concept, lam) for lam in lams]
    assert all(0.0 <= s <= 1.0 for s in member_scores + stranger_scores)
    assert member_scores == sorted(member_scores)
    assert stranger_scores == sorted(stranger_scores, reverse=True)
    with pytest.raises(ValueError):
        item_concept_score("m", member_vec, concept, 1.5)


def test_candidate_items_fixture(mini_engine):
    flowers = mini_engine.concepts[0]
    query = QuerySpec.parse("jasmine")
    assert candidate_items(flowers, mini_engine.index, query) == {
        "i1", "i2", "i3", "i4", "i5", "i6",
    }


def test_candidate_items_empty():
    concept = concept_of({"x": 1.0})
    corpus = make_corpus([TaggedItem(id="i1", tags=["y"])], [])
    index = build_index(corpus)
    assert candidate_items(concept, index, QuerySpec.parse("zzz")) == set()


def test_candidate_items_pool_only(mini_engine):
    pets = mini_engine.concepts[1]
    query = QuerySpec.parse("dog")
    assert candidate_items(pets, mini_engine.index, query) == {"i4"}


def test_normalization_property_random_corpora():
    rng = random.Random(31)
    for _ in range(30):
        corpus = random_corpus(rng)
        index = build_index(corpus)
        for comm in corpus.communities.values():
            cv = build_community_vector(comm, index)
            if cv.vector:
                assert abs(cv.vector.weight_sum() - 1.0) < 1e-9
