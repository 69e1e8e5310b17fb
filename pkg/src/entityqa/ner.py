"""Traditional-NER and quantity entity sources, plus the hybrid merge.

Named-entity mentions come from precomputed annotation spans routed through
a question-type -> annotation-label mapping file; century/year values are
derived from date spans and first/last names from person spans. The
quantity scanner parses greedy chains of digit groups, separators and
numeral words, upgrading a chain followed by a unit-of-measurement word to
a quantity. Deliberately, no check relates the unit to what the question
asks for (a known limitation of this recognizer family).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from decimal import Decimal
from pathlib import Path
from typing import Iterable, NamedTuple

from .corpus import AnnotatedDocument, Span
from .errors import ConfigError, ParseError
from .matcher import EntityMention
from .taxonomy import SynsetId, TaxonomyGraph, first_sense_synset, hypernym_closure

NE_TYPES = (
    "PLACE", "CONTINENT", "RIVER", "LAKE", "MOUNTAIN", "RANGE", "ISLAND",
    "ARCHIPELAGO", "SEA", "CELESTIAL_BODY", "COUNTRY", "STATE", "CITY",
    "NATIONALITY", "PERSON", "NAME", "SURNAME", "BAND", "DYNASTY",
    "ORGANISATION", "COMPANY", "EVENT", "TIME", "CENTURY", "YEAR", "PERIOD",
    "COUNT", "QUANTITY", "VEHICLE", "ANIMAL", "TITLE",
)

_QUANT_LABEL_PREFIX = "quant:"


@dataclass(frozen=True)
class NeTypeMapping:
    """Question NE type -> external annotation labels (and the quantity
    kind, expressed as reserved ``quant:number`` / ``quant:quantity``
    labels). Every known NE type is present, blank rows as empty sets."""

    labels: dict[str, frozenset[str]]
    quant_kinds: dict[str, str]  # NE type -> "number" | "quantity"

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, list[str]]]) -> "NeTypeMapping":
        labels = {t: frozenset() for t in NE_TYPES}
        quant_kinds: dict[str, str] = {}
        for ne_type, row_labels in rows:
            if ne_type not in labels:
                raise ConfigError(f"unknown question NE type {ne_type!r}")
            plain = set()
            for label in row_labels:
                if label.startswith(_QUANT_LABEL_PREFIX):
                    kind = label[len(_QUANT_LABEL_PREFIX):]
                    if kind not in ("number", "quantity"):
                        raise ConfigError(f"unknown quant kind in {label!r}")
                    quant_kinds[ne_type] = kind
                else:
                    plain.add(label)
            labels[ne_type] = frozenset(plain)
        return cls(labels=labels, quant_kinds=quant_kinds)


def load_ne_mapping(path: str | Path) -> NeTypeMapping:
    """Mapping file: ``question_type<TAB>label{,label}`` per line."""
    rows = []
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        ne_type = parts[0]
        labels = [l for l in (parts[1].split(",") if len(parts) > 1 else []) if l]
        rows.append((ne_type, labels))
    try:
        return NeTypeMapping.from_rows(rows)
    except ConfigError as exc:
        raise ParseError(str(exc), source=str(path)) from exc


class NerScan(NamedTuple):
    mentions: list[EntityMention]
    layer_missing: bool


def _digit_tokens(doc: AnnotatedDocument, span: Span) -> list[int]:
    return [
        i for i in range(*span)
        if doc.segments[i].surface.isdigit() and 1 <= len(doc.segments[i].surface) <= 4
    ]


def ner_mentions(
    doc: AnnotatedDocument, model, mapping: NeTypeMapping
) -> NerScan:
    """Annotation spans whose label serves the question's NE type, with
    year/century extraction on date spans and first/last-word selection on
    person spans."""
    if model.ne_type is None:
        return NerScan([], False)
    if doc.ne_annotations is None:
        return NerScan([], True)
    wanted = mapping.labels.get(model.ne_type, frozenset())
    mentions: list[EntityMention] = []

    def add(span: Span, answer: str) -> None:
        mentions.append(EntityMention(
            doc_id=doc.doc_id, span=span, mention_kind="ner",
            matched_name=answer, answer_text=answer, provenance=("ner",),
        ))

    for label, span in doc.ne_annotations:
        if label not in wanted:
            continue
        if model.ne_type == "YEAR":
            for i in _digit_tokens(doc, span):
                add((i, i + 1), doc.segments[i].surface)
        elif model.ne_type == "CENTURY":
            for i in _digit_tokens(doc, span):
                year = int(doc.segments[i].surface)
                add((i, i + 1), str((year + 99) // 100))
        elif model.ne_type == "NAME":
            first = span[0]
            add((first, first + 1), doc.segments[first].surface)
        elif model.ne_type == "SURNAME":
            last = span[1] - 1
            add((last, last + 1), doc.segments[last].surface)
        else:
            add(span, doc.surface_text(span))
    return NerScan(mentions, False)


# --- quantity recognition -----------------------------------------------------

@dataclass(frozen=True)
class NumeralLexicon:
    values: dict[str, Decimal] = field(default_factory=dict)
    scales: dict[str, Decimal] = field(default_factory=dict)
    indeterminate: frozenset[str] = frozenset()

    def knows(self, word: str) -> bool:
        w = word.lower()
        return w in self.values or w in self.scales or w in self.indeterminate


def load_numeral_lexicon(path: str | Path) -> NumeralLexicon:
    """Lexicon file: ``word<TAB>value[<TAB>scale]``; value ``?`` marks words
    of indeterminate magnitude."""
    values: dict[str, Decimal] = {}
    scales: dict[str, Decimal] = {}
    indeterminate: set[str] = set()
    for lineno, raw in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise ParseError("numeral line needs word and value",
                             source=str(path), line=lineno)
        word = parts[0].lower()
        if parts[1] == "?":
            indeterminate.add(word)
            continue
        try:
            value = Decimal(parts[1])
        except ArithmeticError as exc:
            raise ParseError(f"bad numeral value {parts[1]!r}",
                             source=str(path), line=lineno) from exc
        if len(parts) > 2 and parts[2] == "scale":
            scales[word] = value
        else:
            values[word] = value
    return NumeralLexicon(values=values, scales=scales,
                          indeterminate=frozenset(indeterminate))


@dataclass(frozen=True)
class QuantMention:
    span: Span
    kind: str  # number | quantity
    value: Decimal | None  # None only for indeterminate phrases
    unit_lemma: str | None = None
    indeterminate: bool = False


def render_value(value: Decimal) -> str:
    """Canonical decimal string: ``10 000`` and ``10000`` render equally."""
    if value == value.to_integral_value():
        return str(int(value))
    return format(value.normalize(), "f")


def _chain_class(segment) -> str | None:
    s = segment.surface
    if s.isdigit():
        return "D"
    if s == ".":
        return "P"
    if s == ",":
        return "C"
    if segment.tag_class == "numeral":
        return "W"
    return None


def parse_chain(
    tokens: list[tuple[str, str]], lexicon: NumeralLexicon
) -> tuple[int, Decimal | None, bool]:
    """Longest parseable prefix of a token chain.

    ``tokens`` are (class, surface) pairs. Returns (consumed, value,
    indeterminate); consumed == 0 means no number starts here. Periods
    separate digit groups, a comma starts the decimal part, adjacent digit
    groups concatenate, scale words multiply and other numeral words add.
    """
    consumed = 0
    int_digits = ""
    dec_digits = ""
    acc: Decimal | None = None
    indeterminate = False
    state = "start"  # start | int | after_sep | dec | words

    def settle() -> None:
        nonlocal acc, int_digits, dec_digits
        if int_digits:
            literal = Decimal(int_digits + ("." + dec_digits if dec_digits else ""))
            acc = literal if acc is None else acc + literal
            int_digits = ""
            dec_digits = ""

    for cls, surface in tokens:
        word = surface.lower()
        if state in ("start", "int") and cls == "D":
            int_digits += surface
            state = "int"
        elif state == "int" and cls == "P":
            state = "after_sep"
        elif state == "after_sep" and cls == "D":
            int_digits += surface
            state = "int"
            consumed += 1  # the separator we held back
        elif state == "int" and cls == "C":
            state = "after_comma"
        elif state == "after_comma" and cls == "D":
            dec_digits += surface
            state = "dec"
            consumed += 1
        elif state == "dec" and cls == "D":
            dec_digits += surface
        elif cls == "W" and state in ("start", "int", "dec", "words"):
            if not lexicon.knows(word):
                break
            settle()
            if word in lexicon.indeterminate:
                indeterminate = True
            elif word in lexicon.scales:
                acc = (acc if acc is not None else Decimal(1)) * lexicon.scales[word]
            else:
                value = lexicon.values[word]
                acc = value if acc is None else acc + value
            state = "words"
        else:
            break
        if state in ("int", "dec", "words"):
            consumed += 1
    settle()
    if consumed == 0 or (acc is None and not indeterminate):
        return 0, None, False
    return consumed, (None if indeterminate else acc), indeterminate


def is_unit_of_measurement(
    lemma: str, graph: TaxonomyGraph, unit_synset_id: SynsetId | None
) -> bool:
    """True when the lemma's first-sense synset is (or lies under) the
    configured unit-of-measurement synset."""
    if unit_synset_id is None:
        raise ConfigError("unit-of-measurement synset id is not configured")
    synset = first_sense_synset(graph, lemma)
    if synset is None:
        return False
    return synset.id == unit_synset_id or unit_synset_id in hypernym_closure(
        graph, synset.id
    )


def quant_scan(
    doc: AnnotatedDocument,
    graph: TaxonomyGraph,
    lexicon: NumeralLexicon,
    unit_synset_id: SynsetId | None,
) -> list[QuantMention]:
    """Greedy scan for numbers and quantities over the whole document."""
    mentions: list[QuantMention] = []
    n = len(doc.segments)
    i = 0
    while i < n:
        if _chain_class(doc.segments[i]) in (None, "P", "C"):
            i += 1
            continue
        j = i
        while j < n and _chain_class(doc.segments[j]) is not None:
            j += 1
        pos = i
        while pos < j:
            tokens = [
                (_chain_class(doc.segments[k]), doc.segments[k].surface)
                for k in range(pos, j)
            ]
            consumed, value, indeterminate = parse_chain(tokens, lexicon)
            if consumed == 0:
                pos += 1
                continue
            span = (pos, pos + consumed)
            end = span[1]
            unit = None
            if end < n:
                candidate = doc.segments[end].lemma
                if (doc.segments[end].tag_class == "nominal"
                        and is_unit_of_measurement(candidate, graph, unit_synset_id)):
                    unit = candidate
                    span = (span[0], end + 1)
            mentions.append(QuantMention(
                span=span,
                kind="quantity" if unit else "number",
                value=value,
                unit_lemma=unit,
                indeterminate=indeterminate,
            ))
            pos = span[1]
        i = j
    return mentions


def quant_to_entity_mentions(
    doc: AnnotatedDocument, quants: Iterable[QuantMention], kind_filter: str
) -> list[EntityMention]:
    out = []
    for q in quants:
        if q.kind != kind_filter:
            continue
        out.append(EntityMention(
            doc_id=doc.doc_id, span=q.span, mention_kind="quant",
            matched_name=doc.surface_text(q.span),
            answer_text=doc.surface_text(q.span), provenance=("quant",),
        ))
    return out


# --- hybrid merge --------------------------------------------------------------

def hybrid_mentions(
    doc: AnnotatedDocument,
    model,
    sources: tuple[str, ...],
    *,
    deeper: Iterable[EntityMention] = (),
    ner: Iterable[EntityMention] = (),
    quant: Iterable[EntityMention] = (),
) -> list[EntityMention]:
    """Concatenate per-source mentions, deduplicated by (span, answer
    string); the surviving mention keeps its own kind and accumulates the
    provenance of everything merged into it."""
    ordered: list[tuple[str, Iterable[EntityMention]]] = [
        ("deeper", deeper), ("ner", ner), ("quant", quant),
    ]
    merged: dict[tuple[Span, str], EntityMention] = {}
    for source, mentions in ordered:
        if source not in sources:
            continue
        for mention in mentions:
            key = (mention.span, mention.resolved_answer(doc))
            if key in merged:
                kept = merged[key]
                extra = tuple(p for p in mention.provenance
                              if p not in kept.provenance)
                if extra:
                    merged[key] = replace(kept, provenance=kept.provenance + extra)
            else:
                merged[key] = mention
    return sorted(merged.values(),
                  key=lambda m: (m.span, m.mention_kind, m.matched_name))
