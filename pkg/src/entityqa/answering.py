"""Per-question pipeline: retrieve documents, recognize compatible entity
mentions, score each mention's contexts against the question content with
weighted Jaccard similarity, and select the best-scoring mention as the
answer (with its score as the confidence).

Scores of different mentions of the same entity are never aggregated; the
answer is always a single mention's best context score.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, NamedTuple

from .corpus import AnnotatedDocument, Span, sentence_span
from .errors import ValidationError
from .library import EntityLibrary
from .matcher import EntityMention, EntityTrie, filter_compatible, scan_document
from .ner import (NeTypeMapping, NumeralLexicon, hybrid_mentions, ner_mentions,
                  quant_scan, quant_to_entity_mentions)
from .question import QuestionModel, QuestionResources, build_question_model
from .retrieval import Index, idf_weight, search
from .taxonomy import SynsetId, TaxonomyGraph

REFUSAL_UNSUPPORTED = "unsupported-question-type"
REFUSAL_LOW_CONFIDENCE = "low-confidence"
REFUSAL_NO_MENTIONS = "no-mentions"

ANSWERABLE_TYPES = ("NAMED_ENTITY", "UNNAMED_ENTITY")


@dataclass(frozen=True)
class Context:
    base_form_set: frozenset[str]
    strategy: str  # "sentence" or "window"
    title_included: bool
    source_span: Span


def _base_forms(doc: AnnotatedDocument, span: Span) -> set[str]:
    return {
        s.lemma.lower()
        for s in doc.segments[span[0]:span[1]]
        if s.is_content
    }


def _title_forms(doc: AnnotatedDocument) -> set[str]:
    return {token.lower() for token in doc.title.split() if token}


def _covering_sentences(doc: AnnotatedDocument, span: Span) -> Span:
    first = sentence_span(doc, span[0])
    last = sentence_span(doc, span[1] - 1)
    return (first[0], last[1])


def generate_context(
    mention: EntityMention,
    doc: AnnotatedDocument,
    strategy: str,
    include_title: bool,
    *,
    content_size: int = 0,
    window_ratio: float = 1.5,
) -> list[Context]:
    """Contexts for one mention: its sentence, or every window of length
    round(ratio * content size) containing it (each window is scored
    separately; the mention takes its best one)."""
    title = _title_forms(doc) if include_title else set()
    if strategy == "sentence":
        span = _covering_sentences(doc, mention.span)
        return [Context(frozenset(_base_forms(doc, span) | title),
                        "sentence", include_title, span)]
    if strategy != "window":
        raise ValidationError(f"unknown context strategy {strategy!r}")
    n = len(doc.segments)
    m = max(1, round(window_ratio * content_size))
    start, end = mention.span
    length = end - start
    if m < length or m >= n:
        spans = [(0, n)] if m >= n else [mention.span]
    else:
        spans = [(s, s + m)
                 for s in range(max(0, end - m), min(start, n - m) + 1)]
    return [
        Context(frozenset(_base_forms(doc, span) | title),
                "window", include_title, span)
        for span in spans
    ]


def similarity(
    content: Iterable[str],
    context: Context,
    weight_of: Callable[[str], float],
) -> float:
    """Weighted Jaccard: shared-term weight mass over union weight mass.

    Terms are summed in sorted order so the result is independent of set
    iteration order (bit-exact symmetry, reproducible scores).
    """
    a = set(content)
    b = context.base_form_set
    union = a | b
    if not union:
        return 0.0
    shared = sum(weight_of(term) for term in sorted(a & b))
    total = sum(weight_of(term) for term in sorted(union))
    return shared / total if total > 0 else 0.0


# --- runtime wiring ------------------------------------------------------------

@dataclass
class AnswerSettings:
    document_count: int = 20
    min_confidence: float = 0.0
    context_strategy: str = "sentence"
    include_title: bool = True
    window_ratio: float = 1.5
    sources: tuple[str, ...] = ("deeper", "ner", "quant")
    window_cap: int = 8
    candidate_limit: int = 10
    force_document: str | None = None  # corrections mode: expected doc id
    override_general_type: str | None = None
    override_ne_type: str | None = None


@dataclass
class Runtime:
    """Everything the per-question pipeline needs, loaded once."""

    graph: TaxonomyGraph
    library: EntityLibrary
    trie: EntityTrie
    index: Index
    documents: dict[str, AnnotatedDocument]
    question_resources: QuestionResources
    ne_mapping: NeTypeMapping
    numerals: NumeralLexicon
    unit_synset_id: SynsetId | None
    settings: AnswerSettings = field(default_factory=AnswerSettings)

    def weight_of(self, term: str) -> float:
        return idf_weight(self.index, term)


class ScoredCandidate(NamedTuple):
    answer_text: str
    normalized_name: str | None
    doc_id: str
    span: Span
    score: float
    mention_kind: str
    provenance: tuple[str, ...]
    doc_rank: int


@dataclass(frozen=True)
class Answer:
    answer_string: str
    normalized_name: str | None
    supporting_sentence: str
    supporting_doc_id: str
    confidence: float


@dataclass(frozen=True)
class AnswerOutcome:
    model: QuestionModel
    answer: Answer | None
    refusal: str | None
    candidates: tuple[ScoredCandidate, ...]
    diagnostics: tuple[str, ...] = ()


def _apply_overrides(model: QuestionModel, runtime: Runtime,
                     settings: AnswerSettings) -> QuestionModel:
    if settings.override_general_type is None and settings.override_ne_type is None:
        return model
    general = settings.override_general_type or model.general_type
    ne_type = settings.override_ne_type if general == "NAMED_ENTITY" else None
    focus = model.focus_synset
    if general not in ANSWERABLE_TYPES:
        focus = None
    elif focus is None and ne_type is not None:
        focus = runtime.question_resources.focus_config.ne_type_focus.get(ne_type)
    return replace(model, general_type=general, ne_type=ne_type,
                   focus_synset=focus)


def collect_mentions(
    doc: AnnotatedDocument,
    model: QuestionModel,
    runtime: Runtime,
    settings: AnswerSettings,
    diagnostics: list[str],
) -> list[EntityMention]:
    deeper: list[EntityMention] = []
    ner: list[EntityMention] = []
    quant: list[EntityMention] = []
    if "deeper" in settings.sources:
        if model.focus_synset is None:
            diagnostics.append(
                f"{doc.doc_id}: no focus synset; deep recognition skipped"
            )
        else:
            deeper = filter_compatible(
                scan_document(doc, runtime.trie, settings.window_cap),
                doc, model, runtime.graph, runtime.library,
            )
    if "ner" in settings.sources and model.ne_type is not None:
        scan = ner_mentions(doc, model, runtime.ne_mapping)
        ner = scan.mentions
        if scan.layer_missing:
            diagnostics.append(f"{doc.doc_id}: no NE annotation layer")
    if "quant" in settings.sources and model.ne_type is not None:
        kind = runtime.ne_mapping.quant_kinds.get(model.ne_type)
        if kind is not None:
            quants = quant_scan(doc, runtime.graph, runtime.numerals,
                                runtime.unit_synset_id)
            quant = quant_to_entity_mentions(doc, quants, kind)
    return hybrid_mentions(doc, model, settings.sources,
                           deeper=deeper, ner=ner, quant=quant)


def answer_question(
    question_text: str,
    runtime: Runtime,
    settings: AnswerSettings | None = None,
) -> AnswerOutcome:
    settings = settings or runtime.settings
    model = build_question_model(question_text, runtime.question_resources)
    model = _apply_overrides(model, runtime, settings)
    diagnostics: list[str] = []

    if model.general_type not in ANSWERABLE_TYPES:
        return AnswerOutcome(model=model, answer=None,
                             refusal=REFUSAL_UNSUPPORTED, candidates=())
    if model.query is None:
        return AnswerOutcome(model=model, answer=None,
                             refusal=REFUSAL_NO_MENTIONS, candidates=(),
                             diagnostics=("no search query",))

    ranked_docs = search(runtime.index, model.query, settings.document_count)
    doc_order = [doc_id for doc_id, _ in ranked_docs]
    if settings.force_document is not None:
        if settings.force_document not in runtime.documents:
            raise ValidationError(
                f"forced document {settings.force_document!r} is not in the corpus"
            )
        if settings.force_document not in doc_order:
            doc_order.append(settings.force_document)

    scored: list[ScoredCandidate] = []
    for doc_rank, doc_id in enumerate(doc_order):
        doc = runtime.documents[doc_id]
        for mention in collect_mentions(doc, model, runtime, settings, diagnostics):
            contexts = generate_context(
                mention, doc, settings.context_strategy, settings.include_title,
                content_size=len(model.content),
                window_ratio=settings.window_ratio,
            )
            score = max(
                similarity(model.content, context, runtime.weight_of)
                for context in contexts
            )
            normalized = None
            if mention.entity_id is not None:
                normalized = runtime.library.by_id(mention.entity_id).main_name
            scored.append(ScoredCandidate(
                answer_text=mention.resolved_answer(doc),
                normalized_name=normalized,
                doc_id=doc_id,
                span=mention.span,
                score=score,
                mention_kind=mention.mention_kind,
                provenance=mention.provenance,
                doc_rank=doc_rank,
            ))

    scored.sort(key=lambda c: (-c.score, c.doc_rank, c.span))
    candidates = tuple(scored)
    if not candidates:
        return AnswerOutcome(model=model, answer=None,
                             refusal=REFUSAL_NO_MENTIONS,
                             candidates=(), diagnostics=tuple(diagnostics))
    best = candidates[0]
    if best.score < settings.min_confidence:
        return AnswerOutcome(model=model, answer=None,
                             refusal=REFUSAL_LOW_CONFIDENCE,
                             candidates=candidates,
                             diagnostics=tuple(diagnostics))
    doc = runtime.documents[best.doc_id]
    sentence = doc.surface_text(_covering_sentences(doc, best.span))
    answer = Answer(
        answer_string=best.answer_text,
        normalized_name=best.normalized_name,
        supporting_sentence=sentence,
        supporting_doc_id=best.doc_id,
        confidence=best.score,
    )
    return AnswerOutcome(model=model, answer=answer, refusal=None,
                         candidates=candidates, diagnostics=tuple(diagnostics))
