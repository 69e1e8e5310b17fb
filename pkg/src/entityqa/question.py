"""Question analysis: classification patterns, focus analysis, query
generation and question content.

Questions arrive as raw text and are annotated by a small lexicon-driven
annotator (tokens, base forms, nominal runs as groups with the last word as
semantic head); corpus documents, by contrast, come fully annotated from
upstream tools. Classification tries regular expressions in file order;
when none matches and the question opens with an ambiguous pronoun, the
focus (first nominal group after the pronoun) is resolved against the
taxonomy and mapped to a named-entity type where one of its hypernyms is
registered for one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import AnnotatedDocument, Segment, Span, SyntacticGroup
from .errors import ConfigError, ParseError, ValidationError
from .ner import NE_TYPES
from .retrieval import SearchQuery
from .taxonomy import (SynsetId, TaxonomyGraph, first_sense_synset,
                       hypernyms_by_distance)

GENERAL_TYPES = ("VERIFICATION", "OPTION", "NAMED_ENTITY", "UNNAMED_ENTITY",
                 "OTHER_NAME", "MULTIPLE")

_TOKEN_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


# --- annotation -------------------------------------------------------------

@dataclass(frozen=True)
class QuestionLexicon:
    """word (lowercased) -> (lemma, tag class)."""

    entries: dict[str, tuple[str, str]]

    def lemma_of(self, token: str) -> str:
        entry = self.entries.get(token.lower())
        return entry[0] if entry else token.lower()


def load_question_lexicon(path: str | Path) -> QuestionLexicon:
    entries: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[2] not in ("nominal", "numeral", "other"):
            raise ParseError("expected word<TAB>lemma<TAB>class",
                             source=str(path), line=lineno)
        entries[parts[0].lower()] = (parts[1], parts[2])
    return QuestionLexicon(entries=entries)


def annotate_question(text: str, lexicon: QuestionLexicon) -> AnnotatedDocument:
    """Tokenize and tag a question. Unknown capitalized tokens are treated
    as proper names (nominal, lemma kept as-is); unknown digit tokens as
    numerals; everything else unknown is non-nominal."""
    segments: list[Segment] = []
    for token in _TOKEN_RE.findall(text):
        entry = lexicon.entries.get(token.lower())
        if entry is not None:
            lemma, tag_class = entry
        elif token[:1].isupper():
            lemma, tag_class = token, "nominal"
        elif token.isdigit():
            lemma, tag_class = token, "numeral"
        elif any(c.isalnum() for c in token):
            lemma, tag_class = token.lower(), "other"
        else:
            lemma, tag_class = token, "other"
        segments.append(Segment(surface=token, lemma=lemma, tag=tag_class,
                                tag_class=tag_class, sentence_index=0))

    groups: list[SyntacticGroup] = []
    start = None
    for i in range(len(segments) + 1):
        nominal = i < len(segments) and segments[i].tag_class == "nominal"
        if nominal and start is None:
            start = i
        elif not nominal and start is not None:
            groups.append(SyntacticGroup(
                span=(start, i), kind="nominal", head_span=(i - 1, i),
                lemma=" ".join(s.lemma for s in segments[start:i]),
            ))
            start = None
    return AnnotatedDocument(
        doc_id="question", title="", page_kind="article",
        segments=tuple(segments), groups=tuple(groups),
    )


# --- classification patterns -------------------------------------------------

@dataclass(frozen=True)
class ClassificationPattern:
    regex: re.Pattern
    general_type: str
    ne_type: str | None = None


def load_patterns(path: str | Path) -> tuple[ClassificationPattern, ...]:
    """Pattern file: ``regex<TAB>generalType[<TAB>neType]``, tried in file
    order against the space-joined token text."""
    patterns = []
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise ParseError("expected regex<TAB>generalType[<TAB>neType]",
                             source=str(path), line=lineno)
        general_type = parts[1]
        if general_type not in GENERAL_TYPES:
            raise ParseError(f"unknown general type {general_type!r}",
                             source=str(path), line=lineno)
        ne_type = parts[2] if len(parts) == 3 and parts[2] else None
        if ne_type is not None:
            if ne_type not in NE_TYPES:
                raise ParseError(f"unknown NE type {ne_type!r}",
                                 source=str(path), line=lineno)
            if general_type != "NAMED_ENTITY":
                raise ParseError("NE type given for a non-NAMED_ENTITY pattern",
                                 source=str(path), line=lineno)
        try:
            regex = re.compile(parts[0])
        except re.error as exc:
            raise ParseError(f"bad regular expression ({exc})",
                             source=str(path), line=lineno) from exc
        patterns.append(ClassificationPattern(regex=regex,
                                              general_type=general_type,
                                              ne_type=ne_type))
    return tuple(patterns)


@dataclass(frozen=True)
class Classification:
    general_type: str
    ne_type: str | None
    matched_span: Span


def classify(
    doc: AnnotatedDocument, patterns: tuple[ClassificationPattern, ...]
) -> Classification | None:
    """First pattern in file order that matches wins; None when unmatched."""
    text = doc.surface_text()
    offsets = []
    position = 0
    for segment in doc.segments:
        offsets.append((position, position + len(segment.surface)))
        position += len(segment.surface) + 1
    for pattern in patterns:
        match = pattern.regex.search(text)
        if match is None:
            continue
        covered = [
            i for i, (s, e) in enumerate(offsets)
            if match.start() <= s and e <= match.end()
        ]
        span = (covered[0], covered[-1] + 1) if covered else (0, 0)
        return Classification(general_type=pattern.general_type,
                              ne_type=pattern.ne_type, matched_span=span)
    return None


# --- focus analysis -----------------------------------------------------------

@dataclass(frozen=True)
class FocusConfig:
    ambiguous_pronouns: frozenset[str]
    opening_constructions: tuple[tuple[str, ...], ...]
    synset_ne_types: dict[SynsetId, str]  # focus hypernym -> NE type
    ne_type_focus: dict[str, SynsetId] = field(default_factory=dict)

    @classmethod
    def build(cls, pronouns, openings, synset_ne_types) -> "FocusConfig":
        inverse: dict[str, SynsetId] = {}
        for synset_id, ne_type in synset_ne_types.items():
            inverse.setdefault(ne_type, synset_id)
        return cls(
            ambiguous_pronouns=frozenset(p.lower() for p in pronouns),
            opening_constructions=tuple(tuple(o.lower().split()) for o in openings),
            synset_ne_types=dict(synset_ne_types),
            ne_type_focus=inverse,
        )


def load_synset_ne_types(path: str | Path) -> dict[SynsetId, str]:
    """Table file: ``synsetId<TAB>neType`` per line."""
    table: dict[SynsetId, str] = {}
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in NE_TYPES:
            raise ParseError("expected synsetId<TAB>neType",
                             source=str(path), line=lineno)
        table[parts[0]] = parts[1]
    return table


@dataclass(frozen=True)
class FocusAnalysis:
    general_type: str
    ne_type: str | None
    focus_synset: SynsetId | None
    focus_span: Span | None
    consumed_span: Span  # pronoun plus skipped opening constructions
    flagged: bool = False
    reason: str | None = None


def analyse_focus(
    doc: AnnotatedDocument, graph: TaxonomyGraph, config: FocusConfig
) -> FocusAnalysis:
    """Resolve the first nominal group after an ambiguous pronoun to a
    taxonomy synset, narrowing to the semantic head while no lexeme is
    found, then decide named vs unnamed by the registered hypernyms."""

    def fallback(reason: str, consumed: Span) -> FocusAnalysis:
        return FocusAnalysis(general_type="UNNAMED_ENTITY", ne_type=None,
                             focus_synset=None, focus_span=None,
                             consumed_span=consumed, flagged=True, reason=reason)

    if (not doc.segments
            or doc.segments[0].surface.lower() not in config.ambiguous_pronouns):
        return fallback("no-ambiguous-pronoun", (0, 0))
    position = 1
    changed = True
    while changed:
        changed = False
        for opening in config.opening_constructions:
            end = position + len(opening)
            if end <= len(doc.segments) and all(
                doc.segments[position + k].surface.lower() == opening[k]
                for k in range(len(opening))
            ):
                position = end
                changed = True
    consumed = (0, position)

    group = next((g for g in doc.groups if g.span[0] >= position), None)
    if group is None:
        return fallback("no-nominal-group", consumed)

    candidates: list[tuple[Span, str]] = [(group.span, group.lemma or "")]
    if group.span[1] - group.span[0] > 1:
        head = group.head_span
        candidates.append(
            (head, " ".join(s.lemma for s in doc.segments[head[0]:head[1]]))
        )
    focus = None
    focus_span = None
    for span, lemma in candidates:
        lemma = lemma or " ".join(s.lemma for s in doc.segments[span[0]:span[1]])
        synset = first_sense_synset(graph, lemma)
        if synset is not None:
            focus, focus_span = synset.id, span
            break
    if focus is None:
        return fallback("focus-not-in-taxonomy", consumed)

    ne_type = None
    for synset_id in hypernyms_by_distance(graph, focus):
        ne_type = config.synset_ne_types.get(synset_id)
        if ne_type is not None:
            break
    return FocusAnalysis(
        general_type="NAMED_ENTITY" if ne_type else "UNNAMED_ENTITY",
        ne_type=ne_type, focus_synset=focus, focus_span=focus_span,
        consumed_span=consumed,
    )


# --- query and content ---------------------------------------------------------

def _in_span(i: int, span: Span | None) -> bool:
    return span is not None and span[0] <= i < span[1]


def generate_query(
    doc: AnnotatedDocument,
    matched_span: Span | None,
    focus_span: Span | None,
    *,
    max_distance: int = 3,
    prefix_length: int = 1,
) -> SearchQuery:
    """Pattern-matched words are dropped, the focus is kept, and everything
    left is OR-combined under fuzzy term matching."""
    terms: list[str] = []
    for i, segment in enumerate(doc.segments):
        if not segment.is_content or _in_span(i, matched_span):
            continue
        term = segment.lemma.lower()
        if term not in terms:
            terms.append(term)
    if not terms and focus_span is not None:
        terms = [" ".join(s.lemma for s in
                          doc.segments[focus_span[0]:focus_span[1]]).lower()]
    if not terms:
        raise ValidationError("no searchable terms: the question is empty or "
                              "fully consumed by its pattern, with no focus "
                              "to fall back on")
    return SearchQuery(terms=tuple(terms), match_mode="fuzzy",
                       max_distance=max_distance, prefix_length=prefix_length)


def question_content(
    doc: AnnotatedDocument, matched_span: Span | None, focus_span: Span | None
) -> tuple[str, ...]:
    """Base forms outside the matched pattern and the focus lexeme,
    punctuation excluded, duplicates collapsed."""
    content: list[str] = []
    for i, segment in enumerate(doc.segments):
        if not segment.is_content:
            continue
        if _in_span(i, matched_span) or _in_span(i, focus_span):
            continue
        term = segment.lemma.lower()
        if term not in content:
            content.append(term)
    return tuple(content)


# --- the question model ----------------------------------------------------------

@dataclass(frozen=True)
class QuestionModel:
    general_type: str
    ne_type: str | None
    focus_synset: SynsetId | None
    query: SearchQuery | None
    content: tuple[str, ...]
    annotated: AnnotatedDocument
    matched_span: Span | None = None
    focus_span: Span | None = None
    flagged: bool = False
    flag_reason: str | None = None

    def __post_init__(self) -> None:
        if self.ne_type is not None and self.general_type != "NAMED_ENTITY":
            raise ValidationError("NE type present on a non-NAMED_ENTITY model")
        if (self.focus_synset is not None
                and self.general_type not in ("NAMED_ENTITY", "UNNAMED_ENTITY")):
            raise ValidationError("focus synset present on a non-entity model")


@dataclass(frozen=True)
class QuestionResources:
    lexicon: QuestionLexicon
    patterns: tuple[ClassificationPattern, ...]
    focus_config: FocusConfig
    graph: TaxonomyGraph
    fuzzy_max_distance: int = 3
    fuzzy_prefix_length: int = 1


def build_question_model(text: str, resources: QuestionResources) -> QuestionModel:
    doc = annotate_question(text, resources.lexicon)
    classification = classify(doc, resources.patterns)
    flagged = False
    reason = None
    if classification is not None:
        general_type = classification.general_type
        ne_type = classification.ne_type
        matched_span = classification.matched_span
        focus_span = None
        focus = None
        if general_type == "NAMED_ENTITY" and ne_type is not None:
            # Pattern-classified questions carry no focus words; fall back
            # to the synset registered for the NE type so that deep
            # recognition still has a type to check against.
            focus = resources.focus_config.ne_type_focus.get(ne_type)
    else:
        analysis = analyse_focus(doc, resources.graph, resources.focus_config)
        general_type = analysis.general_type
        ne_type = analysis.ne_type
        focus = analysis.focus_synset
        focus_span = analysis.focus_span
        matched_span = analysis.consumed_span
        flagged = analysis.flagged
        reason = analysis.reason

    query: SearchQuery | None
    try:
        query = generate_query(
            doc, matched_span, focus_span,
            max_distance=resources.fuzzy_max_distance,
            prefix_length=resources.fuzzy_prefix_length,
        )
    except ValidationError:
        if general_type in ("NAMED_ENTITY", "UNNAMED_ENTITY"):
            raise
        query = None  # unanswerable types may legitimately have no query

    return QuestionModel(
        general_type=general_type,
        ne_type=ne_type,
        focus_synset=focus,
        query=query,
        content=question_content(doc, matched_span, focus_span),
        annotated=doc,
        matched_span=matched_span,
        focus_span=focus_span,
        flagged=flagged,
        flag_reason=reason,
    )
