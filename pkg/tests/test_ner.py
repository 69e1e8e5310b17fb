from decimal import Decimal

import pytest

from build_toy_fixtures import make_document
from entityqa.errors import ConfigError, ParseError
from entityqa.matcher import EntityMention
from entityqa.ner import (NE_TYPES, NumeralLexicon, hybrid_mentions,
                          is_unit_of_measurement, load_ne_mapping,
                          load_numeral_lexicon, ner_mentions, parse_chain,
                          quant_scan, quant_to_entity_mentions, render_value)
from entityqa.question import QuestionModel
from entityqa.retrieval import SearchQuery


@pytest.fixture(scope="module")
def mapping(toy_dir):
    return load_ne_mapping(toy_dir / "ne_mapping.tsv")


@pytest.fixture(scope="module")
def numerals(toy_dir):
    return load_numeral_lexicon(toy_dir / "numerals.tsv")


def model_for(ne_type, general="NAMED_ENTITY"):
    doc = make_document("q", "", [])
    return QuestionModel(general_type=general, ne_type=ne_type,
                         focus_synset=None,
                         query=SearchQuery(terms=("x",)), content=(),
                         annotated=doc)


def test_mapping_covers_all_types(mapping):
    assert set(mapping.labels) == set(NE_TYPES)
    assert mapping.labels["ANIMAL"] == frozenset()
    assert mapping.labels["PERSON"] == frozenset({"person"})
    assert mapping.quant_kinds == {"PERIOD": "quantity", "COUNT": "number",
                                   "QUANTITY": "quantity"}


def test_mapping_rejects_unknown_type(tmp_path):
    path = tmp_path / "m.tsv"
    path.write_text("NOT_A_TYPE\tperson\n", encoding="utf-8")
    with pytest.raises(ParseError):
        load_ne_mapping(path)


def test_ner_person_and_surname(mapping):
    doc = make_document("d", "T", [
        "The admiral John Fitzgerald Kennedy spoke|spoke|other .",
    ], ne=[("person", "John Fitzgerald Kennedy")])
    persons = ner_mentions(doc, model_for("PERSON"), mapping)
    assert not persons.layer_missing
    assert [m.answer_text for m in persons.mentions] == ["John Fitzgerald Kennedy"]

    surnames = ner_mentions(doc, model_for("SURNAME"), mapping)
    assert [m.answer_text for m in surnames.mentions] == ["Kennedy"]
    names = ner_mentions(doc, model_for("NAME"), mapping)
    assert [m.answer_text for m in names.mentions] == ["John"]


def test_ner_year_and_century(mapping):
    doc = make_document("d", "T", ["He died in May 1925 ."],
                        ne=[("date", "May 1925")])
    years = ner_mentions(doc, model_for("YEAR"), mapping)
    assert [m.answer_text for m in years.mentions] == ["1925"]
    centuries = ner_mentions(doc, model_for("CENTURY"), mapping)
    assert [m.answer_text for m in centuries.mentions] == ["20"]


def test_ner_blank_row_and_missing_layer(mapping):
    doc = make_document("d", "T", ["A tern flew ."], ne=[])
    assert ner_mentions(doc, model_for("ANIMAL"), mapping).mentions == []

    bare = make_document("d", "T", ["A tern flew ."])
    scan = ner_mentions(bare, model_for("PERSON"), mapping)
    assert scan.mentions == [] and scan.layer_missing


def test_ner_spans_stay_inside_annotations(mapping, toy_corpus):
    for doc in toy_corpus:
        if not doc.ne_annotations:
            continue
        for ne_type in ("PERSON", "SURNAME", "YEAR", "TIME", "PLACE"):
            scan = ner_mentions(doc, model_for(ne_type), mapping)
            for mention in scan.mentions:
                assert any(span[0] <= mention.span[0] and mention.span[1] <= span[1]
                           for _, span in doc.ne_annotations)


def test_quant_decimal_chain(toy_graph, numerals):
    doc = make_document("d", "T", ["It weighed 1 . 698 , 88 kilograms ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert len(quants) == 1
    q = quants[0]
    assert q.value == Decimal("1698.88")
    assert q.kind == "quantity" and q.unit_lemma == "kilogram"


def test_quant_word_number_and_unit(toy_graph, numerals):
    doc = make_document("d", "T", ["She carried fifteen kilograms home ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert len(quants) == 1
    assert quants[0].value == Decimal(15)
    assert quants[0].kind == "quantity"
    assert quants[0].unit_lemma == "kilogram"


def test_quant_grouped_digits(toy_graph, numerals):
    doc = make_document("d", "T", ["They sold 10 000 lamps ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert len(quants) == 1
    assert quants[0].value == Decimal(10000)
    assert quants[0].kind == "number"


def test_quant_scale_words(toy_graph, numerals):
    doc = make_document("d", "T", ["About 10 thousand birds passed ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert quants[0].value == Decimal(10000)


def test_quant_indeterminate(toy_graph, numerals):
    doc = make_document("d", "T", ["Perhaps several million worms live here ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert len(quants) == 1
    assert quants[0].indeterminate
    assert quants[0].value is None


def test_quant_trailing_separator_not_consumed(toy_graph, numerals):
    doc = make_document("d", "T", ["The year was 1925 ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    assert len(quants) == 1
    assert quants[0].span == (3, 4)
    assert quants[0].value == Decimal(1925)


def test_parse_chain_longest_valid_prefix(numerals):
    tokens = [("D", "1"), ("C", ","), ("D", "2"), ("C", ","), ("D", "3")]
    consumed, value, indeterminate = parse_chain(tokens, numerals)
    assert consumed == 3 and value == Decimal("1.2")
    assert not indeterminate
    assert parse_chain([("P", ".")], numerals) == (0, None, False)


def test_render_value_normalizes():
    assert render_value(Decimal("10000")) == "10000"
    assert render_value(Decimal("1698.88")) == "1698.88"
    assert render_value(Decimal("15.0")) == "15"


def test_is_unit_of_measurement(toy_graph):
    assert is_unit_of_measurement("kilogram", toy_graph, "130")
    assert is_unit_of_measurement("watt", toy_graph, "130")
    assert is_unit_of_measurement("unit", toy_graph, "130")
    assert not is_unit_of_measurement("king", toy_graph, "130")
    assert not is_unit_of_measurement("zzz", toy_graph, "130")
    with pytest.raises(ConfigError):
        is_unit_of_measurement("watt", toy_graph, None)


def test_hybrid_union_and_dedup(toy_graph):
    doc = make_document("d", "T", ["Rex ruled in 1100 ."])
    model = model_for("PERSON")
    deeper = [EntityMention(doc_id="d", span=(0, 1), mention_kind="deeper",
                            entity_id=1, matched_name="Rex",
                            provenance=("deeper",))]
    ner = [EntityMention(doc_id="d", span=(0, 1), mention_kind="ner",
                         matched_name="Rex", answer_text="Rex",
                         provenance=("ner",)),
           EntityMention(doc_id="d", span=(3, 4), mention_kind="ner",
                         matched_name="1100", answer_text="1100",
                         provenance=("ner",))]
    merged = hybrid_mentions(doc, model, ("deeper", "ner"),
                             deeper=deeper, ner=ner)
    assert len(merged) == 2
    overlap = [m for m in merged if m.span == (0, 1)][0]
    assert overlap.mention_kind == "deeper"
    assert overlap.provenance == ("deeper", "ner")

    only_deeper = hybrid_mentions(doc, model, ("deeper",), deeper=deeper,
                                  ner=ner)
    assert [m.mention_kind for m in only_deeper] == ["deeper"]

    disjoint = hybrid_mentions(doc, model, ("deeper", "ner"),
                               deeper=deeper, ner=ner[1:])
    assert len(disjoint) == len(deeper) + 1


def test_quant_to_entity_mentions(toy_graph, numerals):
    doc = make_document("d", "T", ["They sold 10 000 lamps ."])
    quants = quant_scan(doc, toy_graph, numerals, "130")
    numbers = quant_to_entity_mentions(doc, quants, "number")
    assert [m.answer_text for m in numbers] == ["10 000"]
    assert quant_to_entity_mentions(doc, quants, "quantity") == []
