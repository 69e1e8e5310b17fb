import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entityqa.errors import ParseError, ValidationError
from entityqa.taxonomy import (Synset, first_sense_synset, graph_from_parts,
                               hypernym_closure, hypernyms_by_distance,
                               is_hypernym_or_equal, load_taxonomy)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    graph = load_taxonomy(path)
    assert len(graph.synsets) == 0


def test_toy_fixture_counts(toy_graph):
    assert len(toy_graph.synsets) == 11
    assert sum(len(p) for p in toy_graph.hypernym_parents.values()) == 10


def test_duplicate_synset_id_rejected(tmp_path):
    path = tmp_path / "dup.tsv"
    path.write_text("S\t1\ta:1\nS\t1\tb:1\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_taxonomy(path)


def test_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("S\t1\ta:1\nS\t2\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        load_taxonomy(path)
    assert "2" in str(err.value)


def test_cycle_detected(tmp_path):
    path = tmp_path / "cycle.tsv"
    path.write_text(
        "S\t1\ta:1\nS\t2\tb:1\nH\t1\t2\nH\t2\t1\n", encoding="utf-8")
    with pytest.raises(ValidationError) as err:
        load_taxonomy(path)
    assert "cycle" in str(err.value)


def test_edge_to_unknown_synset(tmp_path):
    path = tmp_path / "edge.tsv"
    path.write_text("S\t1\ta:1\nH\t1\t9\n", encoding="utf-8")
    with pytest.raises(ValidationError):
        load_taxonomy(path)


def test_first_sense_single(toy_graph):
    assert first_sense_synset(toy_graph, "tern").id == "122"
    assert first_sense_synset(toy_graph, "zzz-unknown") is None


def test_first_sense_prefers_lowest_sense_number():
    graph = graph_from_parts(
        [Synset("a", (("rock", 5),)), Synset("b", (("rock", 2),))], [])
    assert first_sense_synset(graph, "rock").id == "b"


def test_first_sense_independent_of_declaration_order():
    synsets = [Synset("a", (("rock", 5),)), Synset("b", (("rock", 2),))]
    for ordering in (synsets, synsets[::-1]):
        graph = graph_from_parts(list(ordering), [])
        assert first_sense_synset(graph, "rock").id == "b"


def test_duplicate_lexeme_rejected():
    with pytest.raises(ValidationError):
        graph_from_parts(
            [Synset("a", (("rock", 1),)), Synset("b", (("rock", 1),))], [])


def test_first_sense_stable_under_file_line_order(tmp_path):
    import itertools

    lines = ["S\t1\trock:5", "S\t2\trock:2", "S\t3\tstone:1",
             "H\t1\t3", "H\t2\t3"]
    path = tmp_path / "shuffled.tsv"
    for permutation in itertools.permutations(lines):
        path.write_text("\n".join(permutation) + "\n", encoding="utf-8")
        graph = load_taxonomy(path)
        assert first_sense_synset(graph, "rock").id == "2"


def test_closure_toy(toy_graph):
    assert hypernym_closure(toy_graph, "112") == {"111", "110", "100"}
    assert hypernym_closure(toy_graph, "100") == set()
    with pytest.raises(ValidationError):
        hypernym_closure(toy_graph, "999")


def test_closure_diamond():
    graph = graph_from_parts(
        [Synset(x, ((x, 1),)) for x in "abcd"],
        [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")],
    )
    assert hypernym_closure(graph, "a") == {"b", "c", "d"}


def test_is_hypernym_or_equal(toy_graph):
    graph = graph_from_parts(
        [Synset(x, ((x, 1),)) for x in ("king", "monarch", "ruler")],
        [("king", "monarch"), ("monarch", "ruler")],
    )
    assert is_hypernym_or_equal(graph, "ruler", "king")
    assert is_hypernym_or_equal(graph, "king", "king")
    assert not is_hypernym_or_equal(toy_graph, "120", "112")
    with pytest.raises(ValidationError):
        is_hypernym_or_equal(toy_graph, "999", "112")


def test_hypernyms_by_distance_order(toy_graph):
    assert hypernyms_by_distance(toy_graph, "112") == ["112", "111", "110", "100"]


@st.composite
def random_dag(draw):
    n = draw(st.integers(min_value=1, max_value=8))
    nodes = [str(i) for i in range(n)]
    edges = []
    for child in range(n):
        for parent in range(child + 1, n):
            if draw(st.booleans()):
                edges.append((nodes[child], nodes[parent]))
    graph = graph_from_parts(
        [Synset(x, ((f"w{x}", 1),)) for x in nodes], edges)
    return graph, nodes


@settings(max_examples=150, deadline=None)
@given(random_dag(), st.data())
def test_transitivity_on_random_dags(graph_nodes, data):
    graph, nodes = graph_nodes
    a = data.draw(st.sampled_from(nodes))
    b = data.draw(st.sampled_from(nodes))
    c = data.draw(st.sampled_from(nodes))
    if is_hypernym_or_equal(graph, a, b) and is_hypernym_or_equal(graph, b, c):
        assert is_hypernym_or_equal(graph, a, c)


@settings(max_examples=100, deadline=None)
@given(random_dag())
def test_closure_properties(graph_nodes):
    graph, nodes = graph_nodes
    for node in nodes:
        closure = hypernym_closure(graph, node)
        assert node not in closure
        for parent in graph.hypernym_parents[node]:
            assert parent in closure
