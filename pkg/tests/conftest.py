import json
import sys
from pathlib import Path

import pytest

from entityqa.corpus import document_from_record, load_corpus
from entityqa.definitions import DefinitionConfig, load_phrase_file
from entityqa.taxonomy import load_taxonomy

ROOT = Path(__file__).resolve().parent.parent
TOY = ROOT / "fixtures" / "toy"
DEFINITION_SUITE = ROOT / "fixtures" / "definitions" / "definition_suite.jsonl"

# The fixture generator doubles as the test-side document builder (same DSL).
sys.path.insert(0, str(ROOT / "scripts"))


@pytest.fixture(scope="session")
def toy_dir() -> Path:
    return TOY


@pytest.fixture(scope="session")
def toy_graph():
    return load_taxonomy(TOY / "taxonomy.tsv")


@pytest.fixture(scope="session")
def toy_corpus():
    return list(load_corpus(TOY / "corpus.jsonl"))


@pytest.fixture(scope="session")
def toy_manifest():
    return json.loads((TOY / "corpus_manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_definition_config():
    return DefinitionConfig.from_phrases(
        load_phrase_file(TOY / "definition_patterns.txt"),
        load_phrase_file(TOY / "opening_constructions.txt"),
    )


@pytest.fixture(scope="session")
def definition_suite():
    records = []
    with DEFINITION_SUITE.open(encoding="utf-8") as handle:
        for line in handle:
            data = json.loads(line)
            records.append((data["label"], document_from_record(data["doc"]),
                            set(data["expected"])))
    return records


@pytest.fixture(scope="session")
def golden_library():
    return json.loads((TOY / "golden_library.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_runtime(toy_graph, toy_corpus, toy_definition_config):
    from entityqa.answering import AnswerSettings, Runtime
    from entityqa.library import build_library
    from entityqa.matcher import build_trie
    from entityqa.ner import load_ne_mapping, load_numeral_lexicon
    from entityqa.question import (FocusConfig, QuestionResources,
                                   load_patterns, load_question_lexicon,
                                   load_synset_ne_types)
    from entityqa.retrieval import build_index

    library, _ = build_library(toy_corpus, toy_graph, toy_definition_config)
    focus_config = FocusConfig.build(
        load_phrase_file(TOY / "ambiguous_pronouns.txt"),
        load_phrase_file(TOY / "opening_constructions.txt"),
        load_synset_ne_types(TOY / "synset_ne_types.tsv"),
    )
    return Runtime(
        graph=toy_graph,
        library=library,
        trie=build_trie(library),
        index=build_index(toy_corpus),
        documents={doc.doc_id: doc for doc in toy_corpus},
        question_resources=QuestionResources(
            lexicon=load_question_lexicon(TOY / "question_lexicon.tsv"),
            patterns=load_patterns(TOY / "patterns.tsv"),
            focus_config=focus_config,
            graph=toy_graph,
        ),
        ne_mapping=load_ne_mapping(TOY / "ne_mapping.tsv"),
        numerals=load_numeral_lexicon(TOY / "numerals.tsv"),
        unit_synset_id="130",
        settings=AnswerSettings(),
    )


@pytest.fixture(scope="session")
def toy_gold():
    from entityqa.evalkit import load_gold_questions
    return load_gold_questions(TOY / "gold_questions.jsonl")
