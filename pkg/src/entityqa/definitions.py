"""Interpretation of encyclopaedia definition paragraphs.

A definition paragraph is reduced to the wordnet synsets that describe the
defined entity: bracketed and quoted material is discarded, the defined
name is split from the definition body on the first matching definition
pattern (a dash or a copula phrase), known prefix phrases are stripped, and
the body is cut into chunks on ``.``, ``,`` and ``;``. The first syntactic
element of every chunk is mapped to synsets until a non-nominal chunk stops
the scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .corpus import AnnotatedDocument, Segment, Span, SyntacticGroup
from .taxonomy import SynsetId, TaxonomyGraph, first_sense_synset

_BRACKET_PAIRS = {"(": ")", "[": "]", "{": "}"}
_QUOTE_PAIRS = {'"': '"', "'": "'", "„": "”", "“": "”", "«": "»", "‘": "’"}
_SEPARATORS = {".", ",", ";"}

DEFAULT_DEFINITION_PATTERNS = ("–", "—", "-", "is a", "is an", "is the", "jest to")


@dataclass(frozen=True)
class DefinitionConfig:
    # Each pattern / prefix is a phrase matched against lowercased surfaces.
    patterns: tuple[tuple[str, ...], ...]
    prefixes: tuple[tuple[str, ...], ...] = ()

    @classmethod
    def from_phrases(cls, patterns, prefixes=()) -> "DefinitionConfig":
        return cls(
            patterns=tuple(tuple(p.lower().split()) for p in patterns),
            prefixes=tuple(tuple(p.lower().split()) for p in prefixes),
        )

    @classmethod
    def default(cls) -> "DefinitionConfig":
        return cls.from_phrases(DEFAULT_DEFINITION_PATTERNS)


def load_phrase_file(path: str | Path) -> tuple[str, ...]:
    """One phrase per line; blank lines and ``#`` comments ignored."""
    phrases = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            phrases.append(line)
    return tuple(phrases)


@dataclass(frozen=True)
class View:
    """A compacted annotated slice: segments plus view-local group spans."""

    segments: tuple[Segment, ...]
    groups: tuple[SyntacticGroup, ...]


def slice_view(doc: AnnotatedDocument, span: Span) -> View:
    start, end = span
    segments = doc.segments[start:end]
    groups = tuple(
        SyntacticGroup(
            span=(g.span[0] - start, g.span[1] - start),
            kind=g.kind,
            head_span=(g.head_span[0] - start, g.head_span[1] - start),
            lemma=g.lemma,
        )
        for g in doc.groups
        if start <= g.span[0] and g.span[1] <= end
    )
    return View(segments=segments, groups=groups)


def strip_enclosed(view: View) -> View:
    """Remove bracketed then quoted material, keeping group annotations.

    Group spans are remapped onto the compacted segment sequence; an
    interval minus removed runs stays one interval there, so nesting is
    preserved. Groups left without segments are dropped. An unmatched
    opening bracket or quote removes everything up to the end.
    """
    n = len(view.segments)
    keep = [True] * n

    stack: list[str] = []
    for i, segment in enumerate(view.segments):
        s = segment.surface
        if s in _BRACKET_PAIRS:
            stack.append(_BRACKET_PAIRS[s])
            keep[i] = False
        elif stack:
            keep[i] = False
            if s == stack[-1]:
                stack.pop()
    if stack:  # unmatched opener: everything after it is already masked
        pass

    closer: str | None = None
    for i, segment in enumerate(view.segments):
        if not keep[i]:
            continue
        s = segment.surface
        if closer is None:
            if s in _QUOTE_PAIRS:
                closer = _QUOTE_PAIRS[s]
                keep[i] = False
        else:
            keep[i] = False
            if s == closer:
                closer = None

    if all(keep):
        return view

    rank = [0] * (n + 1)  # kept segments strictly before index i
    for i in range(n):
        rank[i + 1] = rank[i] + (1 if keep[i] else 0)

    segments = tuple(seg for i, seg in enumerate(view.segments) if keep[i])
    groups = []
    for g in view.groups:
        new_span = (rank[g.span[0]], rank[g.span[1]])
        if new_span[0] == new_span[1]:
            continue
        head = (rank[g.head_span[0]], rank[g.head_span[1]])
        if head[0] == head[1]:  # head fully removed: fall back to last segment
            head = (new_span[1] - 1, new_span[1])
        groups.append(SyntacticGroup(span=new_span, kind=g.kind,
                                     head_span=head, lemma=g.lemma))
    return View(segments=segments, groups=tuple(groups))


# --- chunks ----------------------------------------------------------------

@dataclass(frozen=True)
class Chunk:
    """A word or syntactic group inside a view; the unit Alg-style synset
    extraction recurses over."""

    view: View
    span: Span
    group: SyntacticGroup | None = None  # None: bare word / word sequence

    @property
    def lemma(self) -> str:
        if self.group is not None and self.group.lemma is not None:
            return self.group.lemma
        start, end = self.span
        return " ".join(s.lemma for s in self.view.segments[start:end])

    @property
    def is_group(self) -> bool:
        return self.group is not None

    @property
    def is_coordination(self) -> bool:
        return self.group is not None and self.group.kind == "coordination"

    @property
    def is_nominal(self) -> bool:
        if self.group is not None:
            return self.group.kind in ("nominal", "coordination")
        start, end = self.span
        if end - start != 1:
            return False
        return self.view.segments[start].tag_class == "nominal"

    def elements(self) -> list["Chunk"]:
        """Immediate constituents of a coordination group."""
        assert self.group is not None
        inside = [
            g for g in self.view.groups
            if g is not self.group
            and self.span[0] <= g.span[0] and g.span[1] <= self.span[1]
            and g.span != self.span
        ]
        top = [
            g for g in inside
            if not any(
                h is not g and h.span[0] <= g.span[0] and g.span[1] <= h.span[1]
                for h in inside
            )
        ]
        if top:
            return [Chunk(self.view, g.span, g) for g in sorted(top, key=lambda g: g.span)]
        # No sub-groups annotated: treat each nominal segment as an element.
        return [
            Chunk(self.view, (i, i + 1))
            for i in range(*self.span)
            if self.view.segments[i].tag_class == "nominal"
        ]

    def semantic_head(self) -> "Chunk":
        assert self.group is not None
        head = self.group.head_span
        if head == self.span:
            # Degenerate annotation; drop to a bare word sequence so the
            # extraction recursion always shrinks.
            return Chunk(self.view, head)
        for g in self.view.groups:
            if g.span == head and g is not self.group:
                return Chunk(self.view, head, g)
        return Chunk(self.view, head)


def first_group_or_word(view: View, part: Span) -> Chunk | None:
    """Longest group (or the single word) starting at the part's first
    segment and contained in the part."""
    start, end = part
    if start >= end:
        return None
    best: SyntacticGroup | None = None
    for g in view.groups:
        if g.span[0] == start and g.span[1] <= end:
            if best is None or g.span[1] > best.span[1]:
                best = g
    if best is not None:
        return Chunk(view, best.span, best)
    return Chunk(view, (start, start + 1))


# --- synset extraction ------------------------------------------------------

def extract_synsets(chunk: Chunk, graph: TaxonomyGraph) -> set[SynsetId]:
    """Recursively map a nominal chunk to first-sense synsets.

    A chunk whose lemma is a taxonomy lexeme resolves directly; otherwise a
    coordination resolves as the union over its elements, and any other
    group is replaced by its semantic head.
    """
    synset = first_sense_synset(graph, chunk.lemma)
    if synset is not None:
        return {synset.id}
    if chunk.is_coordination:
        result: set[SynsetId] = set()
        for element in chunk.elements():
            result |= extract_synsets(element, graph)
        return result
    if chunk.is_group:
        return extract_synsets(chunk.semantic_head(), graph)
    return set()


@dataclass(frozen=True)
class DefinitionReading:
    matched: bool
    defined_name: str | None
    synsets: frozenset[SynsetId]


def _match_phrase_at(view: View, phrase: tuple[str, ...], at: int) -> bool:
    if at + len(phrase) > len(view.segments):
        return False
    return all(
        view.segments[at + k].surface.lower() == phrase[k]
        for k in range(len(phrase))
    )


def _find_pattern(view: View, config: DefinitionConfig) -> tuple[int, int] | None:
    """First config pattern that occurs anywhere; returns (start, end)."""
    for phrase in config.patterns:
        for at in range(len(view.segments) - len(phrase) + 1):
            if _match_phrase_at(view, phrase, at):
                return (at, at + len(phrase))
    return None


def interpret_definition(
    doc: AnnotatedDocument,
    span: Span,
    graph: TaxonomyGraph,
    config: DefinitionConfig | None = None,
) -> DefinitionReading:
    """Full reading of one definition paragraph: defined name + synsets."""
    config = config or DefinitionConfig.default()
    view = strip_enclosed(slice_view(doc, span))

    hit = _find_pattern(view, config)
    if hit is None:
        return DefinitionReading(matched=False, defined_name=None,
                                 synsets=frozenset())
    name_end, body_start = hit
    defined_name = " ".join(s.surface for s in view.segments[:name_end]).strip()

    changed = True
    while changed:
        changed = False
        for prefix in config.prefixes:
            if _match_phrase_at(view, prefix, body_start):
                body_start += len(prefix)
                changed = True

    parts: list[Span] = []
    part_start = body_start
    for i in range(body_start, len(view.segments)):
        if view.segments[i].surface in _SEPARATORS:
            parts.append((part_start, i))
            part_start = i + 1
    parts.append((part_start, len(view.segments)))

    synsets: set[SynsetId] = set()
    for part in parts:
        chunk = first_group_or_word(view, part)
        if chunk is None or not chunk.is_nominal:
            break
        synsets |= extract_synsets(chunk, graph)
    return DefinitionReading(matched=True, defined_name=defined_name or None,
                             synsets=frozenset(synsets))


def read_definition(
    doc: AnnotatedDocument,
    span: Span,
    graph: TaxonomyGraph,
    config: DefinitionConfig | None = None,
) -> set[SynsetId]:
    """Synsets describing the entity defined by the paragraph at ``span``."""
    return set(interpret_definition(doc, span, graph, config).synsets)
