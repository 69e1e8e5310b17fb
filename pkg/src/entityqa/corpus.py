"""Data model and ingestion for pre-annotated documents.

Documents arrive fully annotated (segmentation, lemmas, tag classes,
syntactic groups with semantic heads, optional named-entity spans); this
toolkit runs no taggers or parsers of its own. The corpus file is
line-delimited JSON, one document object per line, with paragraph breaks
encoded as a reserved segment (surface ``¶``, tag ``PARA``). A manifest
JSON file next to the corpus records document counts per page kind.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import ParseError, ValidationError

PARA_SURFACE = "¶"
PARA_TAG = "PARA"

PAGE_KINDS = ("article", "disambiguation", "redirect")
TAG_CLASSES = ("nominal", "numeral", "other")

Span = tuple[int, int]  # half-open segment index range


@dataclass(frozen=True)
class Segment:
    surface: str
    lemma: str
    tag: str
    tag_class: str  # one of TAG_CLASSES
    sentence_index: int

    @property
    def capitalized(self) -> bool:
        return self.surface[:1].isupper()

    @property
    def is_para_marker(self) -> bool:
        return self.tag == PARA_TAG

    @property
    def is_content(self) -> bool:
        """Carries lexical content: not a paragraph marker, has a word char."""
        return not self.is_para_marker and any(c.isalnum() for c in self.surface)


@dataclass(frozen=True)
class SyntacticGroup:
    span: Span
    kind: str  # nominal | coordination | other
    head_span: Span
    lemma: str | None = None


@dataclass(frozen=True)
class AnnotatedDocument:
    doc_id: str
    title: str
    page_kind: str
    segments: tuple[Segment, ...]
    groups: tuple[SyntacticGroup, ...] = ()
    ne_annotations: tuple[tuple[str, Span], ...] | None = None
    redirect_target: str | None = None

    def surface_text(self, span: Span | None = None) -> str:
        start, end = span if span else (0, len(self.segments))
        return " ".join(s.surface for s in self.segments[start:end])


def _check_span(span: Span, bound: int, what: str, doc_id: str) -> None:
    start, end = span
    if not (0 <= start <= end <= bound):
        raise ValidationError(
            f"document {doc_id!r}: {what} span {span} out of bounds (0..{bound})"
        )


def validate_document(doc: AnnotatedDocument) -> None:
    if doc.page_kind not in PAGE_KINDS:
        raise ValidationError(
            f"document {doc.doc_id!r}: unknown page kind {doc.page_kind!r}"
        )
    if (doc.redirect_target is not None) != (doc.page_kind == "redirect"):
        raise ValidationError(
            f"document {doc.doc_id!r}: redirectTarget must be present exactly "
            f"on redirect pages"
        )
    previous = -1
    for i, segment in enumerate(doc.segments):
        if not segment.surface:
            raise ValidationError(
                f"document {doc.doc_id!r}: segment {i} has empty surface"
            )
        if segment.tag_class not in TAG_CLASSES:
            raise ValidationError(
                f"document {doc.doc_id!r}: segment {i} has unknown tag class "
                f"{segment.tag_class!r}"
            )
        if segment.sentence_index < previous:
            raise ValidationError(
                f"document {doc.doc_id!r}: sentenceIndex decreases at segment {i}"
            )
        previous = segment.sentence_index
    bound = len(doc.segments)
    for group in doc.groups:
        _check_span(group.span, bound, "group", doc.doc_id)
        gs, ge = group.span
        hs, he = group.head_span
        if not (gs <= hs <= he <= ge):
            raise ValidationError(
                f"document {doc.doc_id!r}: head span {group.head_span} outside "
                f"group span {group.span}"
            )
    if doc.ne_annotations is not None:
        for label, span in doc.ne_annotations:
            _check_span(span, bound, f"NE {label!r}", doc.doc_id)
            if span[0] == span[1]:
                raise ValidationError(
                    f"document {doc.doc_id!r}: empty NE span for {label!r}"
                )


# --- serialization ------------------------------------------------------

def document_to_record(doc: AnnotatedDocument) -> dict:
    record: dict = {
        "docId": doc.doc_id,
        "title": doc.title,
        "pageKind": doc.page_kind,
    }
    if doc.redirect_target is not None:
        record["redirectTarget"] = doc.redirect_target
    record["segments"] = [
        [s.surface, s.lemma, s.tag, s.tag_class, s.sentence_index]
        for s in doc.segments
    ]
    record["groups"] = [
        {
            "span": list(g.span),
            "kind": g.kind,
            "head": list(g.head_span),
            **({"lemma": g.lemma} if g.lemma is not None else {}),
        }
        for g in doc.groups
    ]
    if doc.ne_annotations is not None:
        record["ne"] = [[label, list(span)] for label, span in doc.ne_annotations]
    return record


def serialize_document(doc: AnnotatedDocument) -> str:
    """Canonical one-line JSON form; load + serialize round-trips bytewise."""
    return json.dumps(document_to_record(doc), ensure_ascii=False,
                      separators=(",", ":"))


def document_from_record(record: dict, *, source: str = "", line: int | None = None) -> AnnotatedDocument:
    doc_id = record.get("docId", "<missing docId>")

    def fail(message: str) -> ParseError:
        return ParseError(f"document {doc_id!r}: {message}", source=source, line=line)

    try:
        segments = tuple(
            Segment(surface=s[0], lemma=s[1], tag=s[2], tag_class=s[3],
                    sentence_index=int(s[4]))
            for s in record["segments"]
        )
        groups = tuple(
            SyntacticGroup(
                span=(int(g["span"][0]), int(g["span"][1])),
                kind=g["kind"],
                head_span=(int(g["head"][0]), int(g["head"][1])),
                lemma=g.get("lemma"),
            )
            for g in record.get("groups", [])
        )
        ne = record.get("ne")
        ne_annotations = (
            tuple((item[0], (int(item[1][0]), int(item[1][1]))) for item in ne)
            if ne is not None else None
        )
        doc = AnnotatedDocument(
            doc_id=record["docId"],
            title=record["title"],
            page_kind=record["pageKind"],
            segments=segments,
            groups=groups,
            ne_annotations=ne_annotations,
            redirect_target=record.get("redirectTarget"),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise fail(f"malformed field ({exc})") from exc
    validate_document(doc)
    return doc


def load_corpus(path: str | Path) -> Iterator[AnnotatedDocument]:
    """Yield validated documents in file order.

    ``path`` may be a single ``.jsonl`` file or a directory of them
    (read in sorted name order).
    """
    path = Path(path)
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix == ".jsonl")
    else:
        files = [path]
    for file in files:
        with file.open(encoding="utf-8") as handle:
            for lineno, raw in enumerate(handle, start=1):
                if not raw.strip():
                    continue
                try:
                    record = json.loads(raw)
                except json.JSONDecodeError as exc:
                    raise ParseError(f"invalid JSON ({exc.msg})",
                                     source=str(file), line=lineno) from exc
                yield document_from_record(record, source=str(file), line=lineno)


@dataclass(frozen=True)
class CorpusManifest:
    documents: int
    page_kinds: dict[str, int] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)


def load_manifest(path: str | Path) -> CorpusManifest:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return CorpusManifest(
        documents=data["documents"],
        page_kinds=dict(data.get("pageKinds", {})),
        extra={k: v for k, v in data.items() if k not in ("documents", "pageKinds")},
    )


# --- span helpers -------------------------------------------------------

def sentence_span(doc: AnnotatedDocument, segment_index: int) -> Span:
    """Maximal contiguous range sharing the segment's sentence index."""
    if not (0 <= segment_index < len(doc.segments)):
        raise IndexError(
            f"segment index {segment_index} out of range for {doc.doc_id!r}"
        )
    target = doc.segments[segment_index].sentence_index
    start = segment_index
    while start > 0 and doc.segments[start - 1].sentence_index == target:
        start -= 1
    end = segment_index + 1
    while end < len(doc.segments) and doc.segments[end].sentence_index == target:
        end += 1
    return (start, end)


def iter_paragraphs(doc: AnnotatedDocument) -> Iterator[Span]:
    """Spans between paragraph markers; the markers themselves are excluded."""
    start = 0
    for i, segment in enumerate(doc.segments):
        if segment.is_para_marker:
            yield (start, i)
            start = i + 1
    yield (start, len(doc.segments))


def first_paragraph(doc: AnnotatedDocument) -> Span:
    """Segments up to the first paragraph marker (whole document if none)."""
    if doc.page_kind != "article":
        raise ValidationError(
            f"first_paragraph needs an article page, got {doc.page_kind!r} "
            f"({doc.doc_id!r})"
        )
    return next(iter_paragraphs(doc))
