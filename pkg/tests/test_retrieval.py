import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from build_toy_fixtures import make_document
from entityqa.errors import ConfigError, ValidationError
from entityqa.retrieval import (Index, SearchQuery, build_index,
                                edit_distance, fuzzy_expand, idf_weight,
                                load_index, save_index, search)


def corpus_of(texts):
    return [make_document(f"d{i:03d}", f"T{i}", [text])
            for i, text in enumerate(texts)]


def test_build_index_counts(toy_corpus, toy_manifest):
    index = build_index(toy_corpus)
    assert index.doc_count == toy_manifest["documents"]
    assert build_index([]).doc_count == 0


def test_document_frequency():
    index = build_index(corpus_of(["a shared king", "the shared bird"]))
    assert index.document_frequency["shared"] == 2
    assert index.document_frequency["king"] == 1


def test_idf_examples():
    index = Index(doc_ids=[f"d{i}" for i in range(100)],
                  document_frequency={"common": 100, "mid": 10, "rare": 1})
    assert idf_weight(index, "common") == 0.0
    assert idf_weight(index, "rare") == 1.0
    assert idf_weight(index, "mid") == pytest.approx(0.5)
    assert idf_weight(index, "unseen-term") == 1.0


def test_idf_degenerate_cases():
    with pytest.raises(ValidationError):
        idf_weight(Index(), "x")
    flat = Index(doc_ids=["a", "b"], document_frequency={"t": 2, "u": 2})
    assert idf_weight(flat, "t") == 0.0


def test_idf_monotone_in_df():
    n = 200
    index = Index(doc_ids=[str(i) for i in range(n)],
                  document_frequency={f"t{df}": df for df in range(1, n + 1)})
    weights = [idf_weight(index, f"t{df}") for df in range(1, n + 1)]
    assert weights[0] == 1.0
    assert weights[-1] == 0.0
    assert all(a >= b for a, b in zip(weights, weights[1:]))


def dp_edit_distance(a, b):
    table = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        table[i][0] = i
    for j in range(len(b) + 1):
        table[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            table[i][j] = min(table[i - 1][j] + 1, table[i][j - 1] + 1,
                              table[i - 1][j - 1] + (a[i - 1] != b[j - 1]))
    return table[len(a)][len(b)]


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="abcd", max_size=8), st.text(alphabet="abcd", max_size=8))
def test_edit_distance_against_dp(a, b):
    assert edit_distance(a, b) == dp_edit_distance(a, b)


def test_fuzzy_expand_examples():
    index = build_index(corpus_of(["kennedym spoke", "kennedyego legacy"]))
    got = fuzzy_expand("kennedy", index, max_distance=3, prefix_length=4)
    assert got == {"kennedym", "kennedyego"}
    assert dp_edit_distance("kennedy", "kennedym") == 1
    assert dp_edit_distance("kennedy", "kennedyego") == 3

    assert fuzzy_expand("zzz", index, 3, 1) == set()
    assert "kennedym" in fuzzy_expand("kennedym", index, 0, 8)
    with pytest.raises(ConfigError):
        fuzzy_expand("a", index, 3, 0)


def test_fuzzy_exact_mode_equivalence():
    index = build_index(corpus_of(["alpha beta", "alpha gamma"]))
    for term in ("alpha", "beta", "gamma"):
        assert fuzzy_expand(term, index, 0, len(term)) == {term}


def test_search_basics():
    index = build_index(corpus_of([
        "the king spoke", "the bird flew", "a king and a bird",
    ]))
    query = SearchQuery(terms=("king",), match_mode="exact")
    results = search(index, query, 10)
    assert [doc_id for doc_id, _ in results] == ["d000", "d002"]

    both = SearchQuery(terms=("king", "bird"), match_mode="exact")
    results = search(index, both, 10)
    assert results[0][0] == "d002"  # matches two terms
    assert len(results) == 3

    with pytest.raises(ConfigError):
        search(index, both, 0)


def test_search_additive_rare_terms_dominate():
    texts = ["common word here"] * 9 + ["common rareword"]
    index = build_index(corpus_of(texts))
    query = SearchQuery(terms=("common", "rareword"), match_mode="exact")
    results = search(index, query, 3)
    assert results[0][0] == "d009"


def test_search_matches_surface_layer_too():
    doc = make_document("d000", "T", ["The Kurska sank ."])
    index = build_index([doc])
    query = SearchQuery(terms=("kursk",), match_mode="fuzzy",
                        max_distance=3, prefix_length=1)
    results = search(index, query, 5)
    assert results and results[0][0] == "d000"


def naive_search(index, query, n):
    scores = {}
    for position, doc_id in enumerate(index.doc_ids):
        total = 0.0
        matched = False
        for term in dict.fromkeys(query.terms):
            term = term.lower()
            hit = False
            for layer in ("base", "surface"):
                if query.match_mode == "exact":
                    expansions = {term}
                else:
                    expansions = fuzzy_expand(term, index, query.max_distance,
                                              query.prefix_length, layer)
                if any(position in {p for p, _ in index.postings(e, layer)}
                       for e in expansions):
                    hit = True
            if hit:
                matched = True
                total += idf_weight(index, term)
        if matched:  # weight-zero terms still count as a match
            scores[doc_id] = total
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:n]


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_search_equals_naive_oracle(data):
    vocabulary = ["king", "kong", "bird", "tern", "watt", "w", "kinga"]
    n_docs = data.draw(st.integers(min_value=1, max_value=25))
    texts = [
        " ".join(data.draw(st.lists(st.sampled_from(vocabulary), min_size=1,
                                    max_size=6)))
        for _ in range(n_docs)
    ]
    index = build_index(corpus_of(texts))
    terms = tuple(data.draw(st.lists(st.sampled_from(vocabulary + ["query"]),
                                     min_size=1, max_size=3)))
    query = SearchQuery(terms=terms, match_mode="fuzzy", max_distance=2,
                        prefix_length=1)
    n = data.draw(st.integers(min_value=1, max_value=10))
    assert search(index, query, n) == naive_search(index, query, n)


def test_scores_non_increasing(toy_corpus):
    index = build_index(toy_corpus)
    query = SearchQuery(terms=("king", "polonia", "crown"), match_mode="fuzzy")
    results = search(index, query, 50)
    scores = [s for _, s in results]
    assert scores == sorted(scores, reverse=True)


def test_persistence_round_trip(tmp_path, toy_corpus):
    index = build_index(toy_corpus)
    path = tmp_path / "index.eqi"
    save_index(index, path, corpus_digest="c")
    loaded = load_index(path)
    assert loaded.doc_ids == index.doc_ids
    assert loaded.document_frequency == index.document_frequency
    assert loaded.base_postings == index.base_postings
    assert loaded.surface_postings == index.surface_postings

    query = SearchQuery(terms=("king", "polonia"), match_mode="fuzzy")
    assert search(loaded, query, 10) == search(index, query, 10)


def test_persistence_truncation_detected(tmp_path, toy_corpus):
    index = build_index(toy_corpus)
    path = tmp_path / "index.eqi"
    save_index(index, path)
    blob = path.read_bytes()
    path.write_bytes(blob[:-30])
    with pytest.raises(ValidationError):
        load_index(path)


def test_save_is_deterministic(tmp_path, toy_corpus):
    index = build_index(toy_corpus)
    a = tmp_path / "a.eqi"
    b = tmp_path / "b.eqi"
    save_index(index, a, corpus_digest="c")
    save_index(build_index(toy_corpus), b, corpus_digest="c")
    assert a.read_bytes() == b.read_bytes()
