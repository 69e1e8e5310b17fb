"""Command-line entry point.

Subcommands: ``build-library``, ``build-index``, ``answer``, ``eval``,
``sweep`` and ``inspect-entity``. Exit codes: 0 success, 1 nothing answered
(eval only), 2 usage or validation error. All machine-readable output is
UTF-8 and deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import evalkit
from .answering import answer_question
from .config import (PipelineConfig, load_config, load_definition_config,
                     load_runtime)
from .corpus import load_corpus
from .errors import ConfigError, ParseError, ValidationError
from .library import build_library, file_digest, load_library, save_library
from .matcher import build_trie
from .retrieval import build_index, fuzzy_expand, load_index, save_index
from .taxonomy import load_taxonomy

USAGE_ERROR = 2


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", required=True, help="pipeline config file (YAML)")


def _add_answer_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--documents", type=int, default=None,
                        help="retrieved document count (default 20)")
    parser.add_argument("--min-confidence", type=float, default=None,
                        help="refusal threshold on the answer score (default 0.0)")
    parser.add_argument("--context", choices=("sentence", "window"), default=None,
                        help="context generation strategy (default sentence)")
    parser.add_argument("--window-ratio", type=float, default=None,
                        help="window length as a multiple of the question "
                             "content size (default 1.5)")
    title = parser.add_mutually_exclusive_group()
    title.add_argument("--title", dest="title", action="store_true", default=None,
                       help="append the document title to contexts (default)")
    title.add_argument("--no-title", dest="title", action="store_false",
                       help="do not append the document title")
    parser.add_argument("--sources", default=None,
                        help="comma-separated mention sources out of "
                             "deeper,ner,quant (default all three)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker threads for sweeps (default: available "
                             "parallelism)")


def _overrides(args: argparse.Namespace) -> dict:
    mapping = {
        "documents": "document_count",
        "min_confidence": "min_confidence",
        "context": "context_strategy",
        "window_ratio": "window_ratio",
        "title": "include_title",
        "sources": "sources",
        "workers": "workers",
    }
    out = {}
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entityqa",
        description="Factoid question answering over an annotated corpus "
                    "with taxonomy-backed entity recognition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-library",
                       help="interpret definition paragraphs into the entity library")
    _add_common(p)
    p.add_argument("--report", default=None,
                   help="where to write the build report (default: "
                        "<library>.report.json)")

    p = sub.add_parser("build-index", help="build and persist the inverted index")
    _add_common(p)

    p = sub.add_parser("answer", help="answer a single question")
    _add_common(p)
    p.add_argument("question", help="the question text")
    p.add_argument("--top", type=int, default=None,
                   help="candidates to print (default 10)")
    _add_answer_flags(p)

    p = sub.add_parser("eval", help="run the gold question set")
    _add_common(p)
    p.add_argument("--gold", default=None,
                   help="gold question file (default: config gold_questions)")
    p.add_argument("--bootstrap", action="store_true",
                   help="add bootstrap standard deviations (seeded)")
    p.add_argument("--corrections", default="",
                   help="comma-separated subset of types,documents")
    p.add_argument("--out", default=None, help="output directory")
    _add_answer_flags(p)

    p = sub.add_parser("sweep", help="run a parameter sweep")
    _add_common(p)
    p.add_argument("name", choices=evalkit.SWEEP_NAMES)
    p.add_argument("--out", default=None, help="output directory")
    _add_answer_flags(p)

    p = sub.add_parser("inspect-entity", help="look up library entities by name")
    _add_common(p)
    p.add_argument("name", help="a main name or alias")
    p.add_argument("--fuzzy", action="store_true",
                   help="also report fuzzy key matches")
    p.add_argument("--layer", choices=("surface", "base"), default=None,
                   help="diagnostic: expand the name against this index layer")

    return parser


def _cmd_build_library(config: PipelineConfig, args: argparse.Namespace) -> int:
    config.require_inputs(("taxonomy", "corpus"))
    graph = load_taxonomy(config.path("taxonomy"))
    corpus = load_corpus(config.path("corpus"))
    library, report = build_library(corpus, graph, load_definition_config(config))
    out_path = config.path("library")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_library(
        library, out_path,
        corpus_digest=_digest_of(config.path("corpus")),
        taxonomy_digest=file_digest(config.path("taxonomy")),
    )
    report_path = Path(args.report) if args.report else Path(
        str(out_path) + ".report.json")
    report_path.write_text(report.to_json() + "\n", encoding="utf-8")
    alias_count = sum(len(e.aliases) for e in library.entities)
    print(f"entities: {len(library.entities)}")
    print(f"aliases: {alias_count}")
    print(f"names: {len(library.name_index)}")
    print(f"library: {out_path}")
    print(f"report: {report_path}")
    return 0


def _digest_of(path: Path) -> str:
    if path.is_dir():
        parts = sorted(p for p in path.iterdir() if p.suffix == ".jsonl")
        return "+".join(file_digest(p)[:16] for p in parts) or "empty"
    return file_digest(path)


def _cmd_build_index(config: PipelineConfig, args: argparse.Namespace) -> int:
    config.require_inputs(("corpus",))
    index = build_index(load_corpus(config.path("corpus")))
    out_path = config.path("index")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_index(index, out_path, corpus_digest=_digest_of(config.path("corpus")))
    print(f"documents: {index.doc_count}")
    print(f"base vocabulary: {len(index.base_postings)}")
    print(f"index: {out_path}")
    return 0


def _candidate_json(candidate) -> dict:
    return {
        "answer": candidate.answer_text,
        "entity": candidate.normalized_name,
        "docId": candidate.doc_id,
        "span": list(candidate.span),
        "score": round(candidate.score, 6),
        "kind": candidate.mention_kind,
        "provenance": list(candidate.provenance),
    }


def _cmd_answer(config: PipelineConfig, args: argparse.Namespace) -> int:
    runtime = load_runtime(config)
    outcome = answer_question(args.question, runtime)
    top = args.top if args.top is not None else config.candidate_limit
    record = {
        "question": args.question,
        "generalType": outcome.model.general_type,
        "neType": outcome.model.ne_type,
        "focusSynset": outcome.model.focus_synset,
        "refusal": outcome.refusal,
        "answer": None,
        "candidates": [_candidate_json(c) for c in outcome.candidates[:top]],
    }
    if outcome.answer is not None:
        record["answer"] = {
            "answerString": outcome.answer.answer_string,
            "entity": outcome.answer.normalized_name,
            "supportingSentence": outcome.answer.supporting_sentence,
            "supportingDocId": outcome.answer.supporting_doc_id,
            "confidence": round(outcome.answer.confidence, 6),
        }
    print(json.dumps(record, ensure_ascii=False, indent=2, sort_keys=True))
    return 0


def _out_dir(config: PipelineConfig, args: argparse.Namespace) -> Path:
    if args.out:
        out = Path(args.out)
    else:
        out = config.path("output_dir", required=False) or (config.base_dir / "out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_gold(config: PipelineConfig, args: argparse.Namespace):
    gold_path = Path(args.gold) if getattr(args, "gold", None) else config.path(
        "gold_questions")
    if not gold_path.exists():
        raise ConfigError(f"gold question file does not exist: {gold_path}")
    gold = evalkit.load_gold_questions(gold_path)
    if not gold:
        raise ValidationError(f"gold question file {gold_path} is empty")
    return gold


def _cmd_eval(config: PipelineConfig, args: argparse.Namespace) -> int:
    runtime = load_runtime(config)
    gold = _load_gold(config, args)
    wanted = {part.strip() for part in args.corrections.split(",") if part.strip()}
    unknown = wanted - {"types", "documents"}
    if unknown:
        raise ConfigError(f"unknown corrections: {sorted(unknown)}")
    corrections = evalkit.Corrections(types="types" in wanted,
                                      documents="documents" in wanted)
    results, outcomes = evalkit.evaluate_questions(
        gold, runtime, corrections=corrections)
    report = evalkit.compute_metrics(results)
    if args.bootstrap:
        if config.bootstrap_seed is None:
            raise ConfigError("bootstrap requires bootstrap_seed in the config")
        sigma = evalkit.bootstrap_sigma(results, config.bootstrap_iterations,
                                        config.bootstrap_seed)
        report = replace(report, sigma=sigma)
    out = _out_dir(config, args)
    (out / "eval_report.json").write_text(
        evalkit.report_to_json(report, gold, outcomes) + "\n", encoding="utf-8")
    (out / "eval_report.txt").write_text(evalkit.report_to_text(report),
                                         encoding="utf-8")
    sys.stdout.write(evalkit.report_to_text(report))
    print(f"report: {out / 'eval_report.json'}")
    return 0 if report.answered > 0 else 1


def _cmd_sweep(config: PipelineConfig, args: argparse.Namespace) -> int:
    runtime = load_runtime(config)
    gold = _load_gold(config, args)
    rows = evalkit.run_sweep(
        gold, runtime, args.name,
        document_grid=config.document_grid,
        confidence_grid=config.confidence_grid,
        workers=config.workers,
    )
    out = _out_dir(config, args)
    table_path = out / f"sweep_{args.name}.csv"
    table_path.write_text(evalkit.sweep_table_csv(rows), encoding="utf-8")
    sys.stdout.write(evalkit.sweep_table_csv(rows))
    print(f"table: {table_path}")
    return 0


def _cmd_inspect_entity(config: PipelineConfig, args: argparse.Namespace) -> int:
    config.require_inputs(("library",))
    library = load_library(config.path("library"))
    entities = library.lookup(args.name)
    if args.fuzzy and not entities:
        trie = build_trie(library)
        ids = {i for _, match_ids in trie.fuzzy_matches(args.name)
               for i in match_ids}
        entities = [library.by_id(i) for i in sorted(ids)]
    if args.layer:
        index_path = config.path("index")
        if index_path.exists():
            index = load_index(index_path)
            expansions = sorted(fuzzy_expand(
                args.name.lower(), index, config.fuzzy_max_distance,
                config.fuzzy_prefix_length, layer=args.layer))
            print(f"# {args.layer}-layer expansions: {expansions}")
    if not entities:
        print(f"no entity named {args.name!r}")
        return 0
    for entity in entities:
        print(json.dumps({
            "id": entity.entity_id,
            "mainName": entity.main_name,
            "aliases": sorted(entity.aliases),
            "url": entity.description_url,
            "synsets": sorted(entity.synset_ids),
        }, ensure_ascii=False, sort_keys=True))
    return 0


_COMMANDS = {
    "build-library": _cmd_build_library,
    "build-index": _cmd_build_index,
    "answer": _cmd_answer,
    "eval": _cmd_eval,
    "sweep": _cmd_sweep,
    "inspect-entity": _cmd_inspect_entity,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config, overrides=_overrides(args))
        return _COMMANDS[args.command](config, args)
    except (ConfigError, ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
