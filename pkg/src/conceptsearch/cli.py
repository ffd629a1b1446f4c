"""Command-line interface: ingest, stats, search, concepts, eval, serve."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evaluation
from .corpus import CorpusError, load_corpus, save_corpus, validate
from .engine import EngineConfig, SearchEngine
from .ranker import RankerConfig
from .service import concepts_payload, search_payload, stats_payload
from .storage import StorageError


def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", required=True, help="query text")
    p.add_argument("--mode", default="community", choices=["plain", "cluster", "community"])
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--top-concepts", type=int, default=10)
    p.add_argument("--clusters", type=int, default=5)
    p.add_argument("--lsi-rank", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-cluster-candidates", type=int, default=1000,
                   help="cap on query matches fed to cluster-mode LSI, by TF-IDF score")
    p.add_argument("--grouped", action="store_true")
    p.add_argument("--json", action="store_true", help="print the raw response payload")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conceptsearch",
        description="Concept-driven tag search over community-shared media corpora",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="build an index directory from corpus files")
    p.add_argument("--items", required=True)
    p.add_argument("--communities", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--fields", default="tags,title,description")
    p.add_argument("--sim-threshold", type=float, default=0.9)
    p.add_argument("--strict", action="store_true",
                   help="fail on one-sided membership edges")

    p = sub.add_parser("stats", help="print corpus statistics for an index")
    p.add_argument("index_dir")

    p = sub.add_parser("search", help="query an index")
    p.add_argument("index_dir")
    _add_search_flags(p)

    p = sub.add_parser("concepts", help="show community concepts matching a query")
    p.add_argument("index_dir")
    p.add_argument("--q", required=True)
    p.add_argument("--top", type=int, default=5)

    p = sub.add_parser("eval", help="evaluation harness")
    esub = p.add_subparsers(dest="eval_command", required=True)

    pr = esub.add_parser("run", help="compare systems against judgments")
    pr.add_argument("index_dir")
    pr.add_argument("--queries", required=True, help="file with one query per line")
    pr.add_argument("--qrels", required=True, help="tab-separated query/item/label file")
    pr.add_argument("--systems", default="plain,cluster,community")
    pr.add_argument("--kmax", type=int, default=50)
    pr.add_argument("--out", required=True, help="text report path (.tsv written alongside)")

    ps = esub.add_parser("synth", help="generate the synthetic ambiguity benchmark")
    ps.add_argument("--seed", type=int, default=7)
    ps.add_argument("--pivots", type=int, default=3)
    ps.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the read-only HTTP service")
    p.add_argument("--index", required=True)
    p.add_argument("--bind", default="0.0.0.0:8080")

    return parser


def _cmd_ingest(args) -> int:
    corpus = load_corpus(args.items, args.communities)
    report = validate(corpus, strict=args.strict)
    if not report.ok:
        for violation in report.violations:
            print(f"violation: {violation}", file=sys.stderr)
        return 1
    fields = tuple(f.strip() for f in args.fields.split(",") if f.strip())
    engine = SearchEngine.build(
        corpus, EngineConfig(fields=fields, sim_threshold=args.sim_threshold)
    )
    engine.save(args.out)
    print(
        f"indexed {len(corpus.items)} items, {len(corpus.communities)} communities, "
        f"{len(engine.concepts)} concepts -> {args.out}"
    )
    return 0


def _cmd_stats(args) -> int:
    engine = SearchEngine.load(args.index_dir)
    print(json.dumps(stats_payload(engine), indent=2, ensure_ascii=False))
    return 0


def _cmd_search(args) -> int:
    engine = SearchEngine.load(args.index_dir)
    cfg = RankerConfig(
        mode=args.mode,
        lam=args.lam,
        alpha=args.alpha,
        top_concepts=args.top_concepts,
        k=args.k,
        clusters=args.clusters,
        lsi_rank=args.lsi_rank,
        seed=args.seed,
        max_cluster_candidates=args.max_cluster_candidates,
    )
    result = engine.search(args.q, cfg)
    payload = search_payload(engine, result, cfg, args.grouped)
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
        return 0
    if args.grouped:
        for group in payload["groups"]:
            label = " ".join(group["label"])
            print(f"[{group['concept_id']}] {label}  score={group['score']:.5f}")
            for item in group["items"]:
                tags = ",".join(item["tags"])
                print(f"    {item['id']}  {item['score']:.5f}  {item['title']} [{tags}]")
    else:
        for rank_pos, hit in enumerate(payload["hits"], start=1):
            tags = ",".join(hit["tags"])
            print(f"{rank_pos:2d}. {hit['id']}  {hit['score']:.5f}  {hit['title']} [{tags}]")
    if not payload["hits"] and not (payload["groups"] or []):
        print("(no results)")
    return 0


def _cmd_concepts(args) -> int:
    engine = SearchEngine.load(args.index_dir)
    payload = concepts_payload(engine, args.q, args.top)
    for c in payload["concepts"]:
        label = " ".join(c["label"])
        print(
            f"{c['id']}  {label}  query_score={c['query_score']:.5f}  "
            f"popularity={c['popularity']:.5f}  members={c['member_total']}"
        )
    if not payload["concepts"]:
        print("(no matching concepts)")
    return 0


def _cmd_eval_run(args) -> int:
    engine = SearchEngine.load(args.index_dir)
    queries = [
        line.strip()
        for line in Path(args.queries).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    judgments = evaluation.RelevanceJudgments.load(args.qrels)
    systems = tuple(s.strip() for s in args.systems.split(",") if s.strip())
    report = evaluation.compare_systems(
        evaluation.make_engine_runner(engine), queries, judgments, systems, args.kmax
    )
    coverage = evaluation.coverage_report(
        engine.corpus, queries, engine.community_vectors
    )
    text = evaluation.format_report(report)
    text += (
        f"\ncommunity coverage: {coverage.zero_match_fraction:.1%} of queries have "
        f"no matching community; {coverage.subfloor_only_fraction:.1%} match only "
        f"sub-floor (<{coverage.floor} member) communities\n"
    )
    Path(args.out).write_text(text, encoding="utf-8")
    table_path = Path(args.out).with_suffix(".tsv")
    with open(table_path, "w", encoding="utf-8") as fh:
        fh.write("kind\tsystem\tquery\tk\tprecision\n")
        for row in evaluation.report_rows(report):
            fh.write("\t".join(str(v) for v in row) + "\n")
    print(text)
    print(f"report -> {args.out}; raw table -> {table_path}")
    return 0


def _cmd_eval_synth(args) -> int:
    corpus, queries, judgments = evaluation.generate_ambiguity_benchmark(
        args.seed, args.pivots
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, str(out / "items.jsonl"), str(out / "communities.jsonl"))
    (out / "queries.txt").write_text("\n".join(queries) + "\n", encoding="utf-8")
    judgments.save(str(out / "qrels.tsv"))
    print(
        f"generated {len(corpus.items)} items, {len(corpus.communities)} communities, "
        f"{len(queries)} queries -> {out}"
    )
    print(f"next: conceptsearch ingest --items {out}/items.jsonl "
          f"--communities {out}/communities.jsonl --out {out}/index")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    serve(args.index, args.bind)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "ingest": _cmd_ingest,
        "stats": _cmd_stats,
        "search": _cmd_search,
        "concepts": _cmd_concepts,
        "serve": _cmd_serve,
    }
    try:
        if args.command == "eval":
            handler = {"run": _cmd_eval_run, "synth": _cmd_eval_synth}[args.eval_command]
            return handler(args)
        return handlers[args.command](args)
    except (CorpusError, StorageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
