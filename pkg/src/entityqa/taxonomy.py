"""Immutable wordnet-style taxonomy: lemma -> lexeme -> synset lookup and
hypernymy traversal.

The taxonomy file is UTF-8 and line-oriented with two record kinds::

    S<TAB>synsetId<TAB>lemma:sense{,lemma:sense}
    H<TAB>childId<TAB>parentId

Lines starting with ``#`` are comments. Hypernymy must be acyclic; multiple
parents are allowed (the graph is a DAG, not a tree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import ParseError, ValidationError

SynsetId = str


@dataclass(frozen=True)
class Synset:
    id: SynsetId
    lexemes: tuple[tuple[str, int], ...]  # (lemma, senseNumber), file order
    gloss: str | None = None


@dataclass(frozen=True)
class TaxonomyGraph:
    synsets: dict[SynsetId, Synset]
    hypernym_parents: dict[SynsetId, tuple[SynsetId, ...]]
    # lemma -> lexemes as (senseNumber, synsetId), sorted by ascending sense
    lemma_index: dict[str, tuple[tuple[int, SynsetId], ...]] = field(repr=False)

    def __contains__(self, synset_id: SynsetId) -> bool:
        return synset_id in self.synsets

    def require(self, synset_id: SynsetId) -> Synset:
        try:
            return self.synsets[synset_id]
        except KeyError:
            raise ValidationError(f"unknown synset id {synset_id!r}") from None


def _build_graph(
    synsets: dict[SynsetId, Synset],
    edges: list[tuple[SynsetId, SynsetId]],
    source: str = "",
) -> TaxonomyGraph:
    parents: dict[SynsetId, list[SynsetId]] = {sid: [] for sid in synsets}
    for child, parent in edges:
        for endpoint in (child, parent):
            if endpoint not in synsets:
                raise ValidationError(
                    f"{source}: hypernym edge ({child!r}, {parent!r}) references "
                    f"unknown synset {endpoint!r}"
                )
        if parent not in parents[child]:
            parents[child].append(parent)

    _check_acyclic(parents, source)

    lemma_index: dict[str, list[tuple[int, SynsetId]]] = {}
    seen_pairs: set[tuple[str, int]] = set()
    for synset in synsets.values():
        for lemma, sense in synset.lexemes:
            if (lemma, sense) in seen_pairs:
                raise ValidationError(
                    f"{source}: lexeme ({lemma!r}, {sense}) appears in more than "
                    f"one synset"
                )
            seen_pairs.add((lemma, sense))
            lemma_index.setdefault(lemma, []).append((sense, synset.id))
    for entries in lemma_index.values():
        entries.sort()

    return TaxonomyGraph(
        synsets=synsets,
        hypernym_parents={sid: tuple(ps) for sid, ps in parents.items()},
        lemma_index={lemma: tuple(v) for lemma, v in lemma_index.items()},
    )


def _check_acyclic(parents: dict[SynsetId, list[SynsetId]], source: str) -> None:
    # Iterative DFS with colouring; on a back edge, name one offending edge.
    WHITE, GREY, BLACK = 0, 1, 2
    colour = {sid: WHITE for sid in parents}
    for root in parents:
        if colour[root] != WHITE:
            continue
        stack: list[tuple[SynsetId, int]] = [(root, 0)]
        colour[root] = GREY
        while stack:
            node, next_child = stack[-1]
            succ = parents[node]
            if next_child < len(succ):
                stack[-1] = (node, next_child + 1)
                child = succ[next_child]
                if colour[child] == GREY:
                    raise ValidationError(
                        f"{source}: hypernym cycle through edge "
                        f"({node!r}, {child!r})"
                    )
                if colour[child] == WHITE:
                    colour[child] = GREY
                    stack.append((child, 0))
            else:
                colour[node] = BLACK
                stack.pop()


def load_taxonomy(path: str | Path) -> TaxonomyGraph:
    """Parse and validate a taxonomy file."""
    path = Path(path)
    synsets: dict[SynsetId, Synset] = {}
    edges: list[tuple[SynsetId, SynsetId]] = []
    with path.open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            kind = fields[0]
            if kind == "S":
                if len(fields) < 3:
                    raise ParseError(
                        "synset record needs id and lexeme list",
                        source=str(path), line=lineno,
                    )
                sid = fields[1]
                if sid in synsets:
                    raise ValidationError(
                        f"{path}:{lineno}: duplicate synset id {sid!r}"
                    )
                lexemes = []
                for item in fields[2].split(","):
                    lemma, _, sense_text = item.rpartition(":")
                    if not lemma or not sense_text.isdigit() or int(sense_text) < 1:
                        raise ParseError(
                            f"bad lexeme {item!r} (expected lemma:sense)",
                            source=str(path), line=lineno,
                        )
                    lexemes.append((lemma, int(sense_text)))
                gloss = fields[3] if len(fields) > 3 and fields[3] else None
                synsets[sid] = Synset(id=sid, lexemes=tuple(lexemes), gloss=gloss)
            elif kind == "H":
                if len(fields) != 3:
                    raise ParseError(
                        "hypernym record needs child and parent ids",
                        source=str(path), line=lineno,
                    )
                edges.append((fields[1], fields[2]))
            else:
                raise ParseError(
                    f"unknown record kind {kind!r}", source=str(path), line=lineno
                )
    return _build_graph(synsets, edges, source=str(path))


def graph_from_parts(
    synsets: list[Synset], edges: list[tuple[SynsetId, SynsetId]]
) -> TaxonomyGraph:
    """Build a validated graph directly from parsed parts (test/fixture use)."""
    table = {}
    for synset in synsets:
        if synset.id in table:
            raise ValidationError(f"duplicate synset id {synset.id!r}")
        table[synset.id] = synset
    return _build_graph(table, edges)


def first_sense_synset(graph: TaxonomyGraph, lemma: str) -> Synset | None:
    """Synset holding the lexeme of ``lemma`` with the lowest sense number."""
    entries = graph.lemma_index.get(lemma)
    if not entries:
        return None
    _, synset_id = entries[0]
    return graph.synsets[synset_id]


def hypernym_closure(graph: TaxonomyGraph, synset_id: SynsetId) -> set[SynsetId]:
    """All synsets reachable upward from ``synset_id``, excluding itself."""
    graph.require(synset_id)
    closure: set[SynsetId] = set()
    frontier = list(graph.hypernym_parents[synset_id])
    while frontier:
        node = frontier.pop()
        if node in closure:
            continue
        closure.add(node)
        frontier.extend(graph.hypernym_parents[node])
    closure.discard(synset_id)
    return closure


def hypernyms_by_distance(graph: TaxonomyGraph, synset_id: SynsetId) -> list[SynsetId]:
    """Breadth-first hypernyms, nearest first, starting with the synset itself.

    Ties within one BFS level are broken by synset id so that the order is
    stable regardless of edge file order.
    """
    graph.require(synset_id)
    seen = {synset_id}
    order = [synset_id]
    level = [synset_id]
    while level:
        nxt = sorted(
            {p for node in level for p in graph.hypernym_parents[node]} - seen
        )
        seen.update(nxt)
        order.extend(nxt)
        level = nxt
    return order


def is_hypernym_or_equal(
    graph: TaxonomyGraph, ancestor: SynsetId, descendant: SynsetId
) -> bool:
    """True iff ``ancestor`` equals ``descendant`` or lies above it."""
    graph.require(ancestor)
    graph.require(descendant)
    if ancestor == descendant:
        return True
    return ancestor in hypernym_closure(graph, descendant)
