"""Automatic answer evaluation, metrics, bootstrap error bars and parameter
sweeps.

An answer string is judged by running it through entity recognition and
checking whether the expected answer appears among the names of any
recognized entity (plain string equality also counts); numeric answer types
are compared by normalized value instead. Recall is the fraction of
questions answered at all, precision the fraction of answered questions
answered correctly.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, NamedTuple

import numpy as np

from .answering import AnswerOutcome, AnswerSettings, Runtime, answer_question
from .errors import ConfigError, ParseError, ValidationError
from .library import EntityLibrary
from .matcher import EntityTrie
from .ner import NumeralLexicon, parse_chain
from .question import QuestionLexicon

NUMERIC_NE_TYPES = frozenset({"TIME", "CENTURY", "YEAR", "PERIOD", "COUNT",
                              "QUANTITY"})


@dataclass(frozen=True)
class GoldQuestion:
    id: str
    text: str
    expected_answer: str
    general_type: str
    expected_doc_id: str
    ne_type: str | None = None

    def __post_init__(self) -> None:
        if not self.expected_answer:
            raise ValidationError(f"gold question {self.id!r}: empty expected answer")


def load_gold_questions(path: str | Path) -> list[GoldQuestion]:
    questions = []
    with Path(path).open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
                questions.append(GoldQuestion(
                    id=str(data["id"]),
                    text=data["text"],
                    expected_answer=data["expectedAnswer"],
                    general_type=data["generalType"],
                    ne_type=data.get("neType"),
                    expected_doc_id=data["expectedDocId"],
                ))
            except (json.JSONDecodeError, KeyError, ValidationError) as exc:
                raise ParseError(f"bad gold question record ({exc})",
                                 source=str(path), line=lineno) from exc
    return questions


# --- answer judging ------------------------------------------------------------

def _chunk_strings(tokens: list[str]) -> Iterable[str]:
    for start in range(len(tokens)):
        for end in range(start + 1, len(tokens) + 1):
            yield " ".join(tokens[start:end])


def auto_evaluate(
    answer_string: str,
    expected_answer: str,
    trie: EntityTrie,
    library: EntityLibrary,
) -> bool:
    """True when the two strings name the same entity: the answer string is
    run through recognition and the expected answer is looked for among the
    recognized entities' names (case-insensitively). Equal strings are
    always accepted."""
    if answer_string == expected_answer:
        return True
    expected = expected_answer.casefold()
    tokens = answer_string.split()
    entity_ids: set[int] = set()
    for chunk in _chunk_strings(tokens):
        for _, ids in trie.fuzzy_matches(chunk):
            entity_ids.update(ids)
    for entity_id in entity_ids:
        entity = library.by_id(entity_id)
        if any(name.casefold() == expected for name in entity.names()):
            return True
    return False


def _parse_numeric(text: str, numerals: NumeralLexicon,
                   lexicon: QuestionLexicon):
    """(value, unit lemma or None) for a numeric answer string, or None."""
    tokens = text.split()
    if not tokens:
        return None
    classified = []
    for token in tokens:
        if token.isdigit():
            classified.append(("D", token))
        elif token in (".", ","):
            classified.append(("P" if token == "." else "C", token))
        elif numerals.knows(token):
            classified.append(("W", token))
        else:
            break
    consumed, value, indeterminate = parse_chain(classified, numerals)
    if consumed == 0 or value is None or indeterminate:
        return None
    unit = None
    if consumed < len(tokens):
        if consumed != len(tokens) - 1:
            return None  # more than one trailing token: not a plain quantity
        unit = lexicon.lemma_of(tokens[consumed])
    return value, unit


def numeric_answer_equal(
    answer: str, expected: str, numerals: NumeralLexicon,
    lexicon: QuestionLexicon,
) -> bool | None:
    """Normalized-value equality for numbers and quantities; None when
    either side does not parse as one."""
    a = _parse_numeric(answer, numerals, lexicon)
    b = _parse_numeric(expected, numerals, lexicon)
    if a is None or b is None:
        return None
    (value_a, unit_a), (value_b, unit_b) = a, b
    if value_a != value_b:
        return False
    if unit_a is not None and unit_b is not None:
        return unit_a == unit_b
    return True


def answer_correct(answer_string: str, gold: GoldQuestion, runtime: Runtime) -> bool:
    if gold.ne_type in NUMERIC_NE_TYPES:
        verdict = numeric_answer_equal(
            answer_string, gold.expected_answer, runtime.numerals,
            runtime.question_resources.lexicon,
        )
        if verdict is not None:
            return verdict
        return answer_string.casefold() == gold.expected_answer.casefold()
    return auto_evaluate(answer_string, gold.expected_answer,
                         runtime.trie, runtime.library)


# --- metrics ---------------------------------------------------------------------

class QuestionResult(NamedTuple):
    answered: bool
    correct: bool
    rank_of_correct: int | None  # 1-based; None when absent from candidates


@dataclass(frozen=True)
class EvalReport:
    recall: float
    precision: float | None
    f1: float | None
    mrr: float
    total: int
    answered: int
    correct: int
    verdicts: tuple[QuestionResult, ...] = ()
    sigma: dict[str, float] | None = None


def compute_metrics(results: Iterable[QuestionResult]) -> EvalReport:
    results = tuple(results)
    total = len(results)
    answered = sum(1 for r in results if r.answered)
    correct = sum(1 for r in results if r.correct)
    recall = answered / total if total else 0.0
    precision = correct / answered if answered else None
    f1 = None
    if precision is not None and precision + recall > 0:
        f1 = 2 * precision * recall / (precision + recall)
    mrr = (
        math.fsum(1.0 / r.rank_of_correct for r in results if r.rank_of_correct)
        / total if total else 0.0
    )  # fsum keeps the metric exactly permutation-invariant
    return EvalReport(recall=recall, precision=precision, f1=f1, mrr=mrr,
                      total=total, answered=answered, correct=correct,
                      verdicts=results)


def bootstrap_sigma(
    results: Iterable[QuestionResult], iterations: int, seed: int
) -> dict[str, float]:
    """Standard deviation of each metric over resamples with replacement.

    Resamples where a metric is undefined (nothing answered) are excluded
    from that metric's spread.
    """
    results = tuple(results)
    if not results:
        raise ValidationError("cannot bootstrap an empty result set")
    if iterations < 1:
        raise ConfigError("bootstrap needs at least one iteration")
    rng = np.random.default_rng(seed)
    n = len(results)
    samples: dict[str, list[float]] = {"recall": [], "precision": [],
                                       "f1": [], "mrr": []}
    picks = rng.integers(0, n, size=(iterations, n))
    for row in picks:
        report = compute_metrics([results[i] for i in row])
        samples["recall"].append(report.recall)
        if report.precision is not None:
            samples["precision"].append(report.precision)
        if report.f1 is not None:
            samples["f1"].append(report.f1)
        samples["mrr"].append(report.mrr)
    return {
        metric: float(np.std(values)) if values else float("nan")
        for metric, values in samples.items()
    }


# --- running the gold set -----------------------------------------------------------

@dataclass(frozen=True)
class Corrections:
    """Question-analysis corrections from gold metadata: replace a wrong
    question type and/or force the expected document into the retrieved
    set."""

    types: bool = False
    documents: bool = False


def evaluate_questions(
    gold: list[GoldQuestion],
    runtime: Runtime,
    settings: AnswerSettings | None = None,
    corrections: Corrections = Corrections(),
) -> tuple[list[QuestionResult], list[AnswerOutcome]]:
    if not gold:
        raise ValidationError("the gold question set is empty")
    base = settings or runtime.settings
    results: list[QuestionResult] = []
    outcomes: list[AnswerOutcome] = []
    for question in gold:
        effective = base
        if corrections.types:
            effective = replace(effective,
                                override_general_type=question.general_type,
                                override_ne_type=question.ne_type)
        if corrections.documents:
            effective = replace(effective,
                                force_document=question.expected_doc_id)
        outcome = answer_question(question.text, runtime, effective)
        outcomes.append(outcome)
        answered = outcome.answer is not None
        correct = answered and answer_correct(
            outcome.answer.answer_string, question, runtime
        )
        rank = None
        for position, candidate in enumerate(outcome.candidates, start=1):
            if answer_correct(candidate.answer_text, question, runtime):
                rank = position
                break
        results.append(QuestionResult(answered=answered, correct=correct,
                                      rank_of_correct=rank))
    return results, outcomes


# --- sweeps ---------------------------------------------------------------------------

SWEEP_NAMES = ("documents", "confidence", "context")

DEFAULT_DOCUMENT_GRID = (1, 5, 10, 20, 50, 100)
DEFAULT_CONFIDENCE_GRID = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


class SweepRow(NamedTuple):
    param: str
    value: str
    recall: float
    precision: float | None
    f1: float | None
    mrr: float


def _sweep_row(param: str, value: str, report: EvalReport) -> SweepRow:
    return SweepRow(param=param, value=value, recall=report.recall,
                    precision=report.precision, f1=report.f1, mrr=report.mrr)


def run_sweep(
    gold: list[GoldQuestion],
    runtime: Runtime,
    sweep_name: str,
    *,
    document_grid: tuple[int, ...] = DEFAULT_DOCUMENT_GRID,
    confidence_grid: tuple[float, ...] = DEFAULT_CONFIDENCE_GRID,
    workers: int = 0,
) -> list[SweepRow]:
    """One evaluation run per parameter setting, settings evaluated
    concurrently over the read-only runtime when ``workers`` allows.

    The document-count sweep runs in corrections mode (gold question type
    applied, expected document forced into the retrieved set) so that it
    isolates the recognition stage, mirroring how retrieval-set size is
    studied; the other sweeps run the pipeline as configured.
    """
    base = runtime.settings
    plan: list[tuple[str, str, AnswerSettings, Corrections]] = []
    if sweep_name == "documents":
        for count in document_grid:
            plan.append(("documents", str(count),
                         replace(base, document_count=count),
                         Corrections(types=True, documents=True)))
    elif sweep_name == "confidence":
        for threshold in confidence_grid:
            plan.append(("confidence", format(threshold, "g"),
                         replace(base, min_confidence=threshold),
                         Corrections()))
    elif sweep_name == "context":
        for strategy in ("sentence", "window"):
            for title in (True, False):
                label = strategy + ("+title" if title else "")
                plan.append(("context", label,
                             replace(base, context_strategy=strategy,
                                     include_title=title),
                             Corrections()))
    else:
        raise ConfigError(
            f"unknown sweep {sweep_name!r}; valid names: {', '.join(SWEEP_NAMES)}"
        )

    def run_one(entry) -> SweepRow:
        param, value, settings, corrections = entry
        results, _ = evaluate_questions(gold, runtime, settings,
                                        corrections=corrections)
        return _sweep_row(param, value, compute_metrics(results))

    pool_size = workers if workers > 0 else (os.cpu_count() or 1)
    if pool_size > 1 and len(plan) > 1:
        with ThreadPoolExecutor(max_workers=pool_size) as pool:
            return list(pool.map(run_one, plan))
    return [run_one(entry) for entry in plan]


# --- rendering ---------------------------------------------------------------------------

def _fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def sweep_table_csv(rows: Iterable[SweepRow]) -> str:
    lines = ["param,value,recall,precision,f1,mrr"]
    for row in rows:
        lines.append(",".join([
            row.param, row.value, f"{row.recall:.4f}", _fmt(row.precision),
            _fmt(row.f1), f"{row.mrr:.4f}",
        ]))
    return "\n".join(lines) + "\n"


def report_to_json(report: EvalReport, gold: list[GoldQuestion],
                   outcomes: list[AnswerOutcome]) -> str:
    per_question = []
    for question, verdict, outcome in zip(gold, report.verdicts, outcomes):
        per_question.append({
            "id": question.id,
            "answered": verdict.answered,
            "correct": verdict.correct,
            "rank": verdict.rank_of_correct,
            "answer": outcome.answer.answer_string if outcome.answer else None,
            "refusal": outcome.refusal,
        })
    payload = {
        "total": report.total,
        "answered": report.answered,
        "correct": report.correct,
        "recall": report.recall,
        "precision": report.precision,
        "f1": report.f1,
        "mrr": report.mrr,
        "sigma": report.sigma,
        "questions": per_question,
    }
    return json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True)


def report_to_text(report: EvalReport) -> str:
    lines = [
        f"questions : {report.total}",
        f"answered  : {report.answered}",
        f"correct   : {report.correct}",
        f"recall    : {report.recall:.4f}"
        + (f" (sigma {report.sigma['recall']:.4f})" if report.sigma else ""),
        "precision : " + (_fmt(report.precision) or "n/a")
        + (f" (sigma {report.sigma['precision']:.4f})" if report.sigma else ""),
        "f1        : " + (_fmt(report.f1) or "n/a"),
        f"mrr       : {report.mrr:.4f}",
    ]
    return "\n".join(lines) + "\n"
