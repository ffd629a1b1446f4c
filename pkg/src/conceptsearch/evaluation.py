"""Offline evaluation: precision@k curves, system comparison, coverage.

Relevance judgments live in a tab-separated qrels file (query, item id,
label). Because the original user study cannot be replayed, a synthetic
ambiguity benchmark with planted ground truth stands in for it: one pivot
tag is shared by a popular topical community, a small rival community, and
community-less distractor items that carry the tag in a personal sense.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .corpus import Community, Corpus, TaggedItem, corpus_stats, make_corpus
from .community_concepts import CommunityVector

LABELS = ("good", "bad", "unclear", "unrated")


@dataclass
class RelevanceJudgments:
    """(query, item id) -> label; unclear/unrated pairs never enter precision."""

    judgments: dict[tuple[str, str], str] = field(default_factory=dict)

    def label(self, query: str, item_id: str) -> str:
        return self.judgments.get((query, item_id), "unrated")

    def set(self, query: str, item_id: str, label: str) -> None:
        if label not in LABELS:
            raise ValueError(f"unknown label {label!r}")
        self.judgments[(query, item_id)] = label

    @classmethod
    def load(cls, path: str) -> "RelevanceJudgments":
        out = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip():
                    continue
                parts = line.split("\t")
                if len(parts) != 3:
                    raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
                out.set(parts[0], parts[1], parts[2])
        return out

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for (query, iid), label in sorted(self.judgments.items()):
                fh.write(f"{query}\t{iid}\t{label}\n")


def precision_at_k(
    ranked: list[str], judgments: RelevanceJudgments, query: str, k: int
) -> float | None:
    """Fraction of judged-good items among the judged items in the top k.

    Returns None when no judged item appears in the prefix (undefined, not
    zero)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    good = judged = 0
    for iid in ranked[:k]:
        label = judgments.label(query, iid)
        if label == "good":
            good += 1
            judged += 1
        elif label == "bad":
            judged += 1
    if judged == 0:
        return None
    return good / judged


def precision_curve(
    ranked: list[str], judgments: RelevanceJudgments, query: str, k_max: int
) -> list[float | None]:
    return [precision_at_k(ranked, judgments, query, k) for k in range(1, k_max + 1)]


@dataclass
class SystemEval:
    name: str
    per_query: dict[str, list[float | None]]
    unanswered: list[str]
    mean_curve: list[float | None]

    def mean_at(self, k: int) -> float | None:
        return self.mean_curve[k - 1]


@dataclass
class EvalReport:
    k_max: int
    query_count: int
    systems: dict[str, SystemEval]
    # "A_vs_B" -> per-k relative improvement (P_A - P_B) / P_B; None where
    # undefined (missing values or zero denominator).
    improvements: dict[str, list[float | None]]


def _mean_curve(per_query: dict[str, list[float | None]], k_max: int) -> list[float | None]:
    curve: list[float | None] = []
    for i in range(k_max):
        values = [c[i] for c in per_query.values() if c[i] is not None]
        curve.append(sum(values) / len(values) if values else None)
    return curve


def compare_systems(
    run_system,
    queries: list[str],
    judgments: RelevanceJudgments,
    systems: tuple[str, ...] = ("plain", "cluster", "community"),
    k_max: int = 50,
) -> EvalReport:
    """Evaluate each system over the queries.

    run_system(system, query, k_max) must return a ranked id list, or None
    when the system cannot answer the query (no usable concepts); such
    queries are excluded from that system's averages but kept in its
    unanswered list. Raw per-query curves stay in the report so external
    significance tests can consume them.
    """
    evals: dict[str, SystemEval] = {}
    for system in systems:
        per_query: dict[str, list[float | None]] = {}
        unanswered: list[str] = []
        for query in queries:
            ranked = run_system(system, query, k_max)
            if ranked is None:
                unanswered.append(query)
                continue
            per_query[query] = precision_curve(ranked, judgments, query, k_max)
        evals[system] = SystemEval(
            name=system,
            per_query=per_query,
            unanswered=unanswered,
            mean_curve=_mean_curve(per_query, k_max),
        )

    improvements: dict[str, list[float | None]] = {}
    for a, b in itertools.permutations(systems, 2):
        row: list[float | None] = []
        for i in range(k_max):
            pa = evals[a].mean_curve[i]
            pb = evals[b].mean_curve[i]
            if pa is None or pb is None or pb == 0.0:
                row.append(None)
            else:
                row.append((pa - pb) / pb)
        improvements[f"{a}_vs_{b}"] = row
    return EvalReport(
        k_max=k_max,
        query_count=len(queries),
        systems=evals,
        improvements=improvements,
    )


def make_engine_runner(engine, *, lam: float = 0.5, seed: int = 42):
    """Adapter from a SearchEngine to compare_systems' run_system callable.

    Evaluation always runs at alpha = 1.0 so concept-driven systems are
    measured pure, with no plain-search fill; a query is unanswerable for a
    concept system when no usable concept exists, and for plain search when
    nothing matches at all.
    """
    from .ranker import RankerConfig

    def run_system(system: str, query: str, k_max: int) -> list[str] | None:
        cfg = RankerConfig(mode=system, lam=lam, alpha=1.0, k=k_max, seed=seed)
        try:
            result = engine.search(query, cfg)
        except ValueError:
            return None
        if system == "plain":
            return [h.item_id for h in result.hits] or None
        if not result.concepts:
            return None
        if system == "community" and result.effective_alpha == 0.0:
            return None
        return [h.item_id for h in result.hits]

    return run_system


@dataclass
class CoverageReport:
    floor: int
    communities_per_item: dict[int, int]
    matching_communities_per_query: dict[str, int]
    zero_match_fraction: float
    subfloor_only_fraction: float


def coverage_report(
    corpus: Corpus,
    queries: list[str],
    community_vectors: list[CommunityVector],
    floor: int = 10,
) -> CoverageReport:
    """How many communities could serve each query, and how items spread
    over communities. A community matches a query when its trimmed vector
    carries at least one query term."""
    from .index import tokenize

    per_query: dict[str, int] = {}
    subfloor_only = 0
    zero = 0
    for query in queries:
        terms = tokenize(query)
        matches = [
            cv
            for cv in community_vectors
            if any(cv.vector.get(t) > 0.0 for t in terms)
        ]
        per_query[query] = len(matches)
        if not matches:
            zero += 1
        elif all(cv.member_count < floor for cv in matches):
            subfloor_only += 1
    n = len(queries)
    return CoverageReport(
        floor=floor,
        communities_per_item=corpus_stats(corpus).communities_per_item_histogram,
        matching_communities_per_query=per_query,
        zero_match_fraction=(zero / n) if n else 0.0,
        subfloor_only_fraction=(subfloor_only / n) if n else 0.0,
    )


# ---------------------------------------------------------------------------
# Synthetic ambiguity benchmark
# ---------------------------------------------------------------------------


def generate_ambiguity_benchmark(
    seed: int, pivots: int = 3
) -> tuple[Corpus, list[str], RelevanceJudgments]:
    """Corpus with planted ambiguous pivot tags and ground-truth labels.

    Per pivot: a large community of topical items (labeled good for the
    pivot query), a small rival community, and community-less distractors
    whose short tag lists make them rank high under plain TF-IDF. Noise
    tags follow a Zipf-like distribution. Fully determined by the seed.
    """
    rng = random.Random(seed)
    items: list[TaggedItem] = []
    communities: list[Community] = []
    queries: list[str] = []
    judgments = RelevanceJudgments()

    users = [f"u{i:03d}" for i in range(60)]
    noise_vocab = [f"z{i:03d}" for i in range(120)]
    noise_weights = [1.0 / (i + 1) for i in range(len(noise_vocab))]
    counter = itertools.count()

    def noise_tags(n: int) -> list[str]:
        return rng.choices(noise_vocab, weights=noise_weights, k=n)

    def add_item(tags: list[str], comm_ids: list[str] | None = None) -> str:
        iid = f"i{next(counter):04d}"
        items.append(
            TaggedItem(
                id=iid,
                tags=tags,
                owner=rng.choice(users),
                communities=list(comm_ids or []),
            )
        )
        return iid

    for p in range(pivots):
        pivot = f"pivot{p}"
        queries.append(pivot)

        pop_comm = f"gpop{p}"
        pop_tags = [f"pop{p}t{j}" for j in range(8)]
        communities.append(
            Community(
                id=pop_comm,
                title=f"{pivot} enthusiasts",
                member_count=rng.randint(150, 400),
            )
        )
        for _ in range(rng.randint(40, 60)):
            tags = [pivot] + rng.sample(pop_tags, 3) + noise_tags(1)
            iid = add_item(tags, [pop_comm])
            judgments.set(pivot, iid, "good")

        rare_comm = f"grare{p}"
        rare_tags = [f"rare{p}t{j}" for j in range(5)]
        communities.append(
            Community(
                id=rare_comm,
                title=f"{pivot} niche",
                member_count=rng.randint(10, 20),
            )
        )
        for _ in range(rng.randint(6, 10)):
            tags = [pivot] + rng.sample(rare_tags, 2) + noise_tags(1)
            iid = add_item(tags, [rare_comm])
            judgments.set(pivot, iid, "bad")

        # Personal-name distractors: the pivot tag alone, or with one
        # one-off tag; never in a community.
        for d in range(rng.randint(12, 18)):
            tags = [pivot]
            if rng.random() < 0.5:
                tags.append(f"pers{p}x{d}")
            iid = add_item(tags)
            judgments.set(pivot, iid, "bad")

    bg_comms = []
    for b in range(4):
        cid = f"gbg{b}"
        communities.append(
            Community(id=cid, title=f"background {b}", member_count=rng.randint(15, 80))
        )
        bg_comms.append(cid)
    for _ in range(rng.randint(80, 120)):
        comm = [rng.choice(bg_comms)] if rng.random() < 0.5 else []
        add_item(noise_tags(rng.randint(2, 4)), comm)

    corpus = make_corpus(
        items, communities, {"generator": "ambiguity-benchmark", "seed": seed}
    )
    return corpus, queries, judgments


def format_report(report: EvalReport, ks: tuple[int, ...] = (1, 5, 10, 20, 50)) -> str:
    """Human-readable comparison table."""
    ks = tuple(k for k in ks if k <= report.k_max)
    lines = []
    header = "system".ljust(12) + "".join(f"P@{k}".rjust(9) for k in ks) + "  answered"
    lines.append(header)
    for name, ev in report.systems.items():
        row = name.ljust(12)
        for k in ks:
            v = ev.mean_at(k)
            row += (f"{v:.4f}" if v is not None else "n/a").rjust(9)
        row += f"  {len(ev.per_query)}/{report.query_count}"
        lines.append(row)
    lines.append("")
    lines.append("relative improvement")
    for pair, curve in report.improvements.items():
        row = pair.ljust(24)
        for k in ks:
            v = curve[k - 1]
            row += (f"{v:+.2%}" if v is not None else "n/a").rjust(10)
        lines.append(row)
    return "\n".join(lines) + "\n"


def report_rows(report: EvalReport) -> list[tuple]:
    """Machine-readable rows: per-query and mean precision values."""
    rows: list[tuple] = []
    for name, ev in report.systems.items():
        for query, curve in sorted(ev.per_query.items()):
            for i, value in enumerate(curve):
                if value is not None:
                    rows.append(("query", name, query, i + 1, value))
        for i, value in enumerate(ev.mean_curve):
            if value is not None:
                rows.append(("mean", name, "", i + 1, value))
        for query in ev.unanswered:
            rows.append(("unanswered", name, query, 0, ""))
    return rows
