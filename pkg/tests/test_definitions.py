from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from build_toy_fixtures import make_document
from entityqa.corpus import Segment, SyntacticGroup
from entityqa.definitions import (Chunk, View, first_group_or_word,
                                  interpret_definition, read_definition,
                                  slice_view, strip_enclosed)
from entityqa.taxonomy import Synset, graph_from_parts


def whole(doc):
    return (0, len(doc.segments))


def test_suite_is_exactly_25(definition_suite):
    assert len(definition_suite) == 25


def test_arctic_tern_bracket_case(toy_graph, toy_definition_config):
    doc = make_document("t", "Arctic Tern", [
        "[The Arctic *Tern] ( Sterna paradisaea ) is "
        "[a *seabird of the [tern family]] .",
    ])
    assert read_definition(doc, whole(doc), toy_graph,
                           toy_definition_config) == {"121"}


def test_fully_quoted_paragraph_yields_nothing(toy_graph, toy_definition_config):
    doc = make_document("t", "Q", ["' Rex – a king . '"])
    reading = interpret_definition(doc, whole(doc), toy_graph,
                                   toy_definition_config)
    assert not reading.matched
    assert reading.synsets == frozenset()


def test_king_politician_stop_case(toy_definition_config):
    graph = graph_from_parts(
        [Synset("k", (("king", 1),)), Synset("p", (("politician", 1),))], [])
    doc = make_document("t", "X", [
        "X – [a *king] , [a *politician|politician|nominal] . "
        "He was born in the castle .",
    ])
    assert read_definition(doc, whole(doc), graph,
                           toy_definition_config) == {"k", "p"}


def test_extract_synsets_branches(toy_graph):
    doc = make_document("t", "X", ["{king and seabird}"])
    view = slice_view(doc, whole(doc))
    chunk = Chunk(view, view.groups[0].span, view.groups[0])
    from entityqa.definitions import extract_synsets
    assert extract_synsets(chunk, toy_graph) == {"112", "121"}

    doc = make_document("t", "X", ["[an exiled european *monarch]"])
    view = slice_view(doc, whole(doc))
    chunk = Chunk(view, view.groups[0].span, view.groups[0])
    assert extract_synsets(chunk, toy_graph) == {"111"}

    doc = make_document("t", "X", ["king"])
    view = slice_view(doc, whole(doc))
    assert extract_synsets(Chunk(view, (0, 1)), toy_graph) == {"112"}


def test_strip_enclosed_masks_and_remaps():
    doc = make_document("t", "X", ["[a *king ( of old ) of Polonia] ."])
    view = strip_enclosed(slice_view(doc, whole(doc)))
    assert [s.surface for s in view.segments] == ["a", "king", "of", "Polonia", "."]
    assert view.groups[0].span == (0, 4)
    assert view.groups[0].head_span == (1, 2)


def test_strip_enclosed_nested_and_unmatched():
    doc = make_document("t", "X", ["a ( b ( c ) d ) e"])
    view = strip_enclosed(slice_view(doc, whole(doc)))
    assert [s.surface for s in view.segments] == ["a", "e"]

    doc = make_document("t", "X", ["a ( b c"])
    view = strip_enclosed(slice_view(doc, whole(doc)))
    assert [s.surface for s in view.segments] == ["a"]

    doc = make_document("t", "X", ["a ' b ' c"])
    view = strip_enclosed(slice_view(doc, whole(doc)))
    assert [s.surface for s in view.segments] == ["a", "c"]


def test_first_group_or_word_prefers_longest_contained():
    doc = make_document("t", "X", ["[a [royal *court] of the north] now"])
    view = slice_view(doc, whole(doc))
    chunk = first_group_or_word(view, (0, len(view.segments)))
    assert chunk.group is not None
    assert chunk.span == (0, 6)
    # A part that cuts the big group off falls back to the word.
    chunk = first_group_or_word(view, (0, 3))
    assert chunk.group is None and chunk.span == (0, 1)


def test_degenerate_self_head_terminates(toy_graph):
    view = View(
        segments=(
            Segment(surface="odd", lemma="odd", tag="t", tag_class="nominal",
                    sentence_index=0),
            Segment(surface="pair", lemma="pair", tag="t",
                    tag_class="nominal", sentence_index=0),
        ),
        groups=(
            SyntacticGroup(span=(0, 2), kind="nominal", head_span=(0, 2)),
            SyntacticGroup(span=(0, 2), kind="nominal", head_span=(0, 2)),
        ),
    )
    from entityqa.definitions import extract_synsets
    chunk = Chunk(view, (0, 2), view.groups[0])
    assert extract_synsets(chunk, toy_graph) == set()


def test_golden_definition_suite(definition_suite, toy_graph,
                                 toy_definition_config):
    for label, doc, expected in definition_suite:
        got = read_definition(doc, whole(doc), toy_graph,
                              toy_definition_config)
        assert got == expected, f"{label}: {got} != {expected}"


def _insert_bracketed(doc, position, filler=("(", "pad", ")")):
    """Insert a bracketed run at a segment position, extending any group
    that straddles it, as an upstream annotator would."""
    k = len(filler)
    sentence = (doc.segments[position].sentence_index
                if position < len(doc.segments)
                else (doc.segments[-1].sentence_index if doc.segments else 0))
    inserted = tuple(
        Segment(surface=s, lemma=s, tag="other", tag_class="other",
                sentence_index=sentence)
        for s in filler
    )
    segments = doc.segments[:position] + inserted + doc.segments[position:]

    def shift(span):
        start, end = span
        if position <= start:
            return (start + k, end + k)
        if position < end:
            return (start, end + k)
        return span

    groups = tuple(
        SyntacticGroup(span=shift(g.span), kind=g.kind,
                       head_span=shift(g.head_span), lemma=g.lemma)
        for g in doc.groups
    )
    return replace(doc, segments=segments, groups=groups)


@settings(max_examples=120, deadline=None)
@given(data=st.data())
def test_bracket_insertion_invariance(definition_suite, toy_graph,
                                      toy_definition_config, data):
    label, doc, expected = data.draw(st.sampled_from(definition_suite))
    position = data.draw(st.integers(min_value=0, max_value=len(doc.segments)))
    modified = _insert_bracketed(doc, position)
    original = read_definition(doc, whole(doc), toy_graph,
                               toy_definition_config)
    got = read_definition(modified, whole(modified), toy_graph,
                          toy_definition_config)
    assert got == original, f"{label} at {position}"
