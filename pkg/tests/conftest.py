import random

import pytest

from conceptsearch import Community, EngineConfig, SearchEngine, TaggedItem, make_corpus


def mini_items():
    return [
        TaggedItem(id="i1", tags=["jasmine", "flower", "white"], owner="u1", communities=["g1"]),
        TaggedItem(id="i2", tags=["flower", "rose"], owner="u1", communities=["g1"]),
        TaggedItem(id="i3", tags=["jasmine", "garden"], owner="u2", communities=["g1"]),
        TaggedItem(id="i4", tags=["jasmine", "dog"], owner="u3", communities=["g2"]),
        TaggedItem(id="i5", tags=["jasmine", "girl"], owner="u4"),
        TaggedItem(id="i6", tags=["tea", "jasmine"], owner="u4"),
    ]


def mini_communities():
    return [
        Community(id="g1", title="Flowers", member_count=100),
        Community(id="g2", title="Pets", member_count=5),
    ]


@pytest.fixture
def mini_corpus():
    return make_corpus(mini_items(), mini_communities())


@pytest.fixture(scope="session")
def mini_engine():
    corpus = make_corpus(mini_items(), mini_communities())
    return SearchEngine.build(corpus, EngineConfig())


def random_corpus(rng: random.Random, max_items: int = 60, vocab_size: int = 25):
    """Small random corpus with communities; always passes validation."""
    n_items = rng.randint(1, max_items)
    vocab = [f"t{i:02d}" for i in range(vocab_size)]
    items = []
    for i in range(n_items):
        items.append(
            TaggedItem(
                id=f"i{i:03d}",
                title=" ".join(rng.sample(vocab, rng.randint(0, 2))),
                tags=rng.sample(vocab, rng.randint(0, 6)),
                owner=f"u{rng.randint(0, 15)}",
            )
        )
    communities = []
    for g in range(rng.randint(0, 6)):
        pool = rng.sample(
            [item.id for item in items], rng.randint(0, min(12, n_items))
        )
        communities.append(
            Community(
                id=f"g{g:02d}",
                member_count=rng.randint(0, 200),
                item_ids=pool,
            )
        )
    return make_corpus(items, communities)


def random_query(rng: random.Random, vocab_size: int = 25) -> str:
    terms = []
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.1:
            terms.append("unknownterm")
        else:
            terms.append(f"t{rng.randint(0, vocab_size - 1):02d}")
    return " ".join(terms)
