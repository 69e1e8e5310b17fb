import random

import pytest

from entityqa.errors import ConfigError, ValidationError
from entityqa.evalkit import (Corrections, GoldQuestion, QuestionResult,
                              auto_evaluate, bootstrap_sigma, compute_metrics,
                              evaluate_questions, load_gold_questions,
                              numeric_answer_equal, run_sweep,
                              sweep_table_csv)
from entityqa.library import EntityLibrary
from entityqa.matcher import EntityTrie, build_trie


def test_load_gold(toy_dir, toy_gold):
    assert len(toy_gold) == 20
    assert toy_gold[0].id == "q01"
    assert toy_gold[0].ne_type == "ANIMAL"
    assert toy_gold[11].general_type == "VERIFICATION"


def test_gold_rejects_empty_answer():
    with pytest.raises(ValidationError):
        GoldQuestion(id="x", text="t", expected_answer="",
                     general_type="NAMED_ENTITY", expected_doc_id="d")


def test_auto_evaluate_fallback_equality():
    empty = EntityLibrary()
    trie = EntityTrie()
    assert auto_evaluate("Komorowski", "Komorowski", trie, empty)
    assert not auto_evaluate("Komorowski", "Tusk", trie, empty)


def test_auto_evaluate_via_alias(toy_runtime):
    assert auto_evaluate("Sobieski", "John Sobieski",
                         toy_runtime.trie, toy_runtime.library)
    assert auto_evaluate("John Sobieski", "Sobieski",
                         toy_runtime.trie, toy_runtime.library)
    assert auto_evaluate("JFK", "John Kennedy",
                         toy_runtime.trie, toy_runtime.library)


def test_auto_evaluate_inflected(toy_runtime):
    assert auto_evaluate("Kurska", "Kursk",
                         toy_runtime.trie, toy_runtime.library)
    assert auto_evaluate("The Arctic Tern", "Arctic Tern",
                         toy_runtime.trie, toy_runtime.library)


def test_auto_evaluate_case_insensitive_names(toy_runtime):
    assert auto_evaluate("Kursk", "kursk",
                         toy_runtime.trie, toy_runtime.library)


def test_auto_evaluate_rejects_other_entities(toy_runtime):
    assert not auto_evaluate("Kursk", "Orzel",
                             toy_runtime.trie, toy_runtime.library)
    assert not auto_evaluate("Common Tern", "Arctic Tern",
                             toy_runtime.trie, toy_runtime.library)


def test_numeric_equality(toy_runtime):
    numerals = toy_runtime.numerals
    lexicon = toy_runtime.question_resources.lexicon
    assert numeric_answer_equal("5 000 watts", "5000 watts", numerals, lexicon)
    assert numeric_answer_equal("10 000", "10000", numerals, lexicon)
    assert numeric_answer_equal("fifteen kilograms", "15 kilograms",
                                numerals, lexicon)
    assert not numeric_answer_equal("15 kilograms", "15 watts",
                                    numerals, lexicon)
    assert not numeric_answer_equal("15", "16", numerals, lexicon)
    assert numeric_answer_equal("abc", "abc", numerals, lexicon) is None


def test_compute_metrics_examples():
    results = ([QuestionResult(True, True, 1)] * 4
               + [QuestionResult(True, False, None)] * 4
               + [QuestionResult(False, False, None)] * 2)
    report = compute_metrics(results)
    assert report.recall == pytest.approx(0.8)
    assert report.precision == pytest.approx(0.5)
    assert report.f1 == pytest.approx(2 * 0.8 * 0.5 / 1.3)

    ranks = [QuestionResult(True, True, 2)] * 5
    assert compute_metrics(ranks).mrr == pytest.approx(0.5)

    silent = [QuestionResult(False, False, None)] * 3
    report = compute_metrics(silent)
    assert report.precision is None
    assert report.recall == 0.0


def test_compute_metrics_permutation_invariant():
    rng = random.Random(7)
    results = [QuestionResult(rng.random() < 0.7, rng.random() < 0.4,
                              rng.choice([None, 1, 2, 3]))
               for _ in range(50)]
    results = [QuestionResult(a, a and c, r if a and c else None)
               for a, c, r in results]
    base = compute_metrics(results)
    shuffled = results[:]
    rng.shuffle(shuffled)
    got = compute_metrics(shuffled)
    assert (base.recall, base.precision, base.f1, base.mrr) == \
        (got.recall, got.precision, got.f1, got.mrr)


def test_bootstrap_determinism_and_degenerate():
    results = [QuestionResult(True, True, 1)] * 30
    a = bootstrap_sigma(results, 500, seed=11)
    b = bootstrap_sigma(results, 500, seed=11)
    assert a == b
    assert a["recall"] == 0.0  # no variance in an all-identical sample

    with pytest.raises(ValidationError):
        bootstrap_sigma([], 10, seed=1)
    with pytest.raises(ConfigError):
        bootstrap_sigma(results, 0, seed=1)


def test_bootstrap_binomial_sanity():
    results = ([QuestionResult(True, True, 1)] * 50
               + [QuestionResult(True, False, None)] * 50)
    sigma = bootstrap_sigma(results, 2000, seed=42)
    assert sigma["precision"] == pytest.approx(0.05, abs=0.005)


def test_evaluate_questions_empty_gold(toy_runtime):
    with pytest.raises(ValidationError):
        evaluate_questions([], toy_runtime)


def test_corrections_force_document_and_type(toy_runtime, toy_gold):
    q20 = [q for q in toy_gold if q.id == "q20"]
    plain, _ = evaluate_questions(q20, toy_runtime)
    assert not plain[0].answered
    corrected, outcomes = evaluate_questions(
        q20, toy_runtime, corrections=Corrections(types=True, documents=True))
    assert corrected[0].answered and corrected[0].correct
    assert outcomes[0].answer.answer_string == "Grey Fort"


def test_sweep_rows_and_csv(toy_runtime, toy_gold):
    rows = run_sweep(toy_gold[:6], toy_runtime, "context")
    assert [r.value for r in rows] == ["sentence+title", "sentence",
                                       "window+title", "window"]
    csv = sweep_table_csv(rows)
    lines = csv.strip().splitlines()
    assert lines[0] == "param,value,recall,precision,f1,mrr"
    assert len(lines) == 5

    with pytest.raises(ConfigError):
        run_sweep(toy_gold, toy_runtime, "nonsense")


def test_sweep_workers_match_serial(toy_runtime, toy_gold):
    serial = run_sweep(toy_gold[:5], toy_runtime, "confidence",
                       confidence_grid=(0.0, 0.5, 1.0), workers=1)
    threaded = run_sweep(toy_gold[:5], toy_runtime, "confidence",
                         confidence_grid=(0.0, 0.5, 1.0), workers=4)
    assert serial == threaded
