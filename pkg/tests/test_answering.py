from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from build_toy_fixtures import make_document
from entityqa.answering import (REFUSAL_LOW_CONFIDENCE, REFUSAL_NO_MENTIONS,
                                REFUSAL_UNSUPPORTED, Context,
                                answer_question, generate_context, similarity)
from entityqa.matcher import EntityMention


def mention_at(span):
    return EntityMention(doc_id="d", span=span, mention_kind="deeper",
                         entity_id=1, matched_name="x")


def ctx(terms):
    return Context(base_form_set=frozenset(terms), strategy="sentence",
                   title_included=False, source_span=(0, 1))


def unit_weights(_term):
    return 1.0


def test_generate_context_sentence():
    doc = make_document("d", "Title Word", [
        "The king spoke .", "The bird flew away .",
    ])
    contexts = generate_context(mention_at((1, 2)), doc, "sentence", False)
    assert len(contexts) == 1
    assert contexts[0].base_form_set == {"the", "king", "spoke"}
    assert contexts[0].source_span == (0, 4)

    titled = generate_context(mention_at((1, 2)), doc, "sentence", True)
    assert {"title", "word"} <= titled[0].base_form_set


def test_generate_context_window():
    doc = make_document("d", "T", ["a b c d e f g h"])
    contexts = generate_context(mention_at((3, 4)), doc, "window", False,
                                content_size=2, window_ratio=1.5)
    # M = round(1.5 * 2) = 3; windows containing segment 3
    assert [c.source_span for c in contexts] == [(1, 4), (2, 5), (3, 6)]

    whole = generate_context(mention_at((3, 4)), doc, "window", False,
                             content_size=8, window_ratio=1.5)
    assert [c.source_span for c in whole] == [(0, 8)]  # M >= doc length

    tiny = generate_context(mention_at((2, 6)), doc, "window", False,
                            content_size=1, window_ratio=1.5)
    assert [c.source_span for c in tiny] == [(2, 6)]  # window below span size


def test_window_length_example():
    doc = make_document("d", "T", [" ".join("abcdefghijklmnop")])
    contexts = generate_context(mention_at((0, 1)), doc, "window", False,
                                content_size=8, window_ratio=1.5)
    assert all(c.source_span[1] - c.source_span[0] == 12 for c in contexts)


def test_similarity_examples():
    assert similarity({"a", "b"}, ctx({"a", "b"}), unit_weights) == 1.0
    assert similarity({"a"}, ctx({"b"}), unit_weights) == 0.0
    assert similarity(set(), ctx(set()), unit_weights) == 0.0

    weights = {"a": 0.5, "b": 1.0, "c": 0.25}
    got = similarity({"a", "b"}, ctx({"b", "c"}), weights.__getitem__)
    assert got == pytest.approx(1.0 / 1.75)


@settings(max_examples=200, deadline=None)
@given(a=st.sets(st.sampled_from("abcdefgh")),
       b=st.sets(st.sampled_from("abcdefgh")),
       data=st.data())
def test_similarity_symmetry_and_monotonicity(a, b, data):
    weights = {t: data.draw(st.floats(min_value=0.01, max_value=1.0))
               for t in a | b | {"z", "y"}}
    w = weights.__getitem__
    assert similarity(a, ctx(b), w) == similarity(b, ctx(a), w)

    extended_shared = similarity(a | {"z"}, ctx(b | {"z"}), w)
    assert extended_shared >= similarity(a, ctx(b), w) - 1e-12

    one_side = similarity(a | {"y"}, ctx(b - {"y"}), w)
    assert one_side <= similarity(a, ctx(b - {"y"}), w) + 1e-12


def test_verification_refusal(toy_runtime):
    outcome = answer_question("Did Lee Oswald kill John Kennedy ?",
                              toy_runtime)
    assert outcome.refusal == REFUSAL_UNSUPPORTED
    assert outcome.answer is None
    assert outcome.candidates == ()


def test_min_confidence_above_one_refuses(toy_runtime):
    settings_ = replace(toy_runtime.settings, min_confidence=1.01)
    outcome = answer_question(
        "Which bird migrates from the Arctic to the Antarctic every year ?",
        toy_runtime, settings_)
    assert outcome.refusal == REFUSAL_LOW_CONFIDENCE
    assert outcome.answer is None
    assert outcome.candidates  # the ranked list is still reported


def test_no_mentions_refusal(toy_runtime):
    outcome = answer_question("Which fortress guards the harbour of Nordland ?",
                              toy_runtime)
    assert outcome.refusal == REFUSAL_NO_MENTIONS
    assert outcome.answer is None


def test_bird_question_end_to_end(toy_runtime):
    outcome = answer_question(
        "Which bird migrates from the Arctic to the Antarctic every year ?",
        toy_runtime)
    assert outcome.refusal is None
    assert outcome.answer is not None
    assert outcome.answer.normalized_name == "Arctic Tern"
    assert outcome.answer.supporting_doc_id == "d016"
    assert "migrates" in outcome.answer.supporting_sentence
    assert 0.0 < outcome.answer.confidence <= 1.0
    assert outcome.model.ne_type == "ANIMAL"


def test_answer_is_head_of_candidates(toy_runtime):
    outcome = answer_question(
        "Which russian submarine sank in 2000 with its whole crew ?",
        toy_runtime)
    assert outcome.answer is not None
    head = outcome.candidates[0]
    assert outcome.answer.answer_string == head.answer_text
    assert outcome.answer.confidence == head.score
    scores = [c.score for c in outcome.candidates]
    assert scores == sorted(scores, reverse=True)


def test_no_aggregation_across_mentions(toy_runtime):
    outcome = answer_question(
        "Which russian submarine sank in 2000 with its whole crew ?",
        toy_runtime)
    kursk_rows = [c for c in outcome.candidates
                  if c.normalized_name == "Kursk"]
    assert len(kursk_rows) > 1  # several mentions, none merged
    assert outcome.answer.confidence == max(c.score for c in kursk_rows)
    assert outcome.answer.confidence <= 1.0


def test_answered_set_shrinks_with_confidence(toy_runtime, toy_gold):
    answered = []
    for threshold in (0.0, 0.3, 0.6, 1.01):
        settings_ = replace(toy_runtime.settings, min_confidence=threshold)
        count = 0
        for question in toy_gold:
            outcome = answer_question(question.text, toy_runtime, settings_)
            count += outcome.answer is not None
        answered.append(count)
    assert answered == sorted(answered, reverse=True)
    assert answered[-1] == 0
