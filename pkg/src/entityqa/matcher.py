"""Runtime entity recognition: a prefix trie over all library names, fuzzy
suffix matching for inflected mentions, and question-type compatibility
filtering.

A chunk matches a name when they share a common prefix, neither unmatched
suffix exceeds 3 characters, and the common prefix is longer than the
chunk's unmatched suffix. Matching is case-sensitive; the capital-letter
requirement for named-entity questions is applied afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .corpus import AnnotatedDocument, Span
from .errors import ValidationError
from .library import EntityLibrary
from .taxonomy import TaxonomyGraph, is_hypernym_or_equal

MAX_SUFFIX = 3  # unmatched characters tolerated on either side

CHUNK_SOURCES = ("groupLemma", "surfaceSequence", "baseFormSequence")
MENTION_KINDS = ("deeper", "ner", "quant")


def name_matches(chunk: str, key: str) -> bool:
    """The three fuzzy matching rules; empty chunks never match."""
    if not chunk:
        return False
    limit = min(len(chunk), len(key))
    p = 0
    while p < limit and chunk[p] == key[p]:
        p += 1
    chunk_suffix = len(chunk) - p
    return (
        chunk_suffix <= MAX_SUFFIX
        and len(key) - p <= MAX_SUFFIX
        and p > chunk_suffix
    )


class _TrieNode:
    __slots__ = ("children", "entity_ids")

    def __init__(self) -> None:
        self.children: dict[str, _TrieNode] = {}
        self.entity_ids: list[int] | None = None


class EntityTrie:
    """Character trie mapping every entity name to its entity id list."""

    def __init__(self) -> None:
        self._root = _TrieNode()
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def insert(self, key: str, entity_ids: list[int]) -> None:
        if not key:
            raise ValidationError("empty string cannot be an entity name key")
        node = self._root
        for char in key:
            node = node.children.setdefault(char, _TrieNode())
        if node.entity_ids is None:
            self._size += 1
        node.entity_ids = sorted(entity_ids)

    def lookup(self, key: str) -> list[int]:
        node = self._root
        for char in key:
            node = node.children.get(char)
            if node is None:
                return []
        return list(node.entity_ids) if node.entity_ids else []

    def keys(self) -> Iterable[str]:
        stack = [(self._root, "")]
        while stack:
            node, prefix = stack.pop()
            if node.entity_ids is not None:
                yield prefix
            for char in sorted(node.children, reverse=True):
                stack.append((node.children[char], prefix + char))

    def _collect(self, node: _TrieNode, prefix: str, depth_left: int,
                 out: dict[str, list[int]]) -> None:
        if node.entity_ids is not None:
            out[prefix] = node.entity_ids
        if depth_left == 0:
            return
        for char, child in node.children.items():
            self._collect(child, prefix + char, depth_left - 1, out)

    def fuzzy_matches(self, chunk: str) -> list[tuple[str, list[int]]]:
        """All (key, entityIds) whose key passes ``name_matches(chunk, key)``.

        Descends along the chunk; keys can only qualify once the shared
        prefix is both within 3 characters of the chunk's end and longer
        than what remains, so candidates are enumerated from that depth on,
        looking at most 3 characters past each divergence point.
        """
        n = len(chunk)
        if n == 0:
            return []
        p_min = max(n - MAX_SUFFIX, n // 2 + 1)
        candidates: dict[str, list[int]] = {}
        node = self._root
        for p in range(n + 1):
            if p >= p_min:
                if p == n:
                    self._collect(node, chunk, MAX_SUFFIX, candidates)
                else:
                    if node.entity_ids is not None:
                        candidates[chunk[:p]] = node.entity_ids
                    for char, child in node.children.items():
                        if char != chunk[p]:
                            self._collect(child, chunk[:p] + char,
                                          MAX_SUFFIX - 1, candidates)
            if p == n:
                break
            node = node.children.get(chunk[p])
            if node is None:
                break
        return sorted(
            (key, list(ids)) for key, ids in candidates.items()
            if name_matches(chunk, key)
        )


def build_trie(library: EntityLibrary) -> EntityTrie:
    trie = EntityTrie()
    for name, ids in library.name_index.items():
        trie.insert(name, ids)
    return trie


# --- candidate chunks -------------------------------------------------------

class CandidateChunk(NamedTuple):
    text: str
    span: Span
    source: str


def candidate_chunks(doc: AnnotatedDocument, window_cap: int = 8) -> list[CandidateChunk]:
    """Mention candidates from three sources: surface-form segment sequences
    (up to ``window_cap`` segments), word and group lemmas, and the same
    sequences in base forms. Duplicates by (text, span) are dropped, keeping
    the surface reading, so an exact surface hit is reported as such."""
    out: list[CandidateChunk] = []
    seen: set[tuple[str, Span]] = set()

    def emit(text: str, span: Span, source: str) -> None:
        if not text:
            return
        key = (text, span)
        if key not in seen:
            seen.add(key)
            out.append(CandidateChunk(text, span, source))

    n = len(doc.segments)
    for length in range(1, min(window_cap, n) + 1):
        for start in range(n - length + 1):
            span = (start, start + length)
            emit(" ".join(s.surface for s in doc.segments[start:start + length]),
                 span, "surfaceSequence")

    for i, segment in enumerate(doc.segments):
        emit(segment.lemma, (i, i + 1), "baseFormSequence")
    for group in doc.groups:
        text = group.lemma if group.lemma is not None else " ".join(
            s.lemma for s in doc.segments[group.span[0]:group.span[1]]
        )
        emit(text, group.span, "groupLemma")

    for length in range(1, min(window_cap, n) + 1):
        for start in range(n - length + 1):
            span = (start, start + length)
            emit(" ".join(s.lemma for s in doc.segments[start:start + length]),
                 span, "baseFormSequence")
    return out


# --- mentions ----------------------------------------------------------------

@dataclass(frozen=True)
class EntityMention:
    doc_id: str
    span: Span
    mention_kind: str  # deeper | ner | quant
    entity_id: int | None = None
    matched_name: str = ""
    chunk_source: str | None = None
    answer_text: str | None = None  # overrides the span's surface text
    provenance: tuple[str, ...] = ()

    def resolved_answer(self, doc: AnnotatedDocument) -> str:
        if self.answer_text is not None:
            return self.answer_text
        return doc.surface_text(self.span)


def scan_document(doc: AnnotatedDocument, trie: EntityTrie,
                  window_cap: int = 8) -> list[EntityMention]:
    """All trie hits over the candidate chunks, one mention per entity id,
    deduplicated by (entity id, span)."""
    found: dict[tuple[int, Span], EntityMention] = {}
    for chunk in candidate_chunks(doc, window_cap):
        for key, entity_ids in trie.fuzzy_matches(chunk.text):
            for entity_id in entity_ids:
                dedup = (entity_id, chunk.span)
                if dedup not in found:
                    found[dedup] = EntityMention(
                        doc_id=doc.doc_id,
                        span=chunk.span,
                        mention_kind="deeper",
                        entity_id=entity_id,
                        matched_name=key,
                        chunk_source=chunk.source,
                        provenance=("deeper",),
                    )
    return sorted(found.values(), key=lambda m: (m.span, m.entity_id))


def filter_compatible(
    mentions: Iterable[EntityMention],
    doc: AnnotatedDocument,
    model,  # question.QuestionModel
    graph: TaxonomyGraph,
    library: EntityLibrary,
) -> list[EntityMention]:
    """Keep deep-recognition mentions agreeing with the question model:
    capitalized first segment for named-entity questions, and the focus
    synset equal to or above one of the entity's synsets. Mentions of other
    kinds pass through untouched."""
    if model.general_type not in ("NAMED_ENTITY", "UNNAMED_ENTITY"):
        raise ValidationError(
            f"cannot filter mentions for question type {model.general_type!r}"
        )
    kept: list[EntityMention] = []
    for mention in mentions:
        if mention.mention_kind != "deeper":
            kept.append(mention)
            continue
        if model.focus_synset is None:
            raise ValidationError(
                "question model lacks a focus synset; cannot type-check "
                "deep-recognition mentions"
            )
        if (model.general_type == "NAMED_ENTITY"
                and not doc.segments[mention.span[0]].capitalized):
            continue
        entity = library.by_id(mention.entity_id)
        if any(
            is_hypernym_or_equal(graph, model.focus_synset, synset_id)
            for synset_id in entity.synset_ids
        ):
            kept.append(mention)
    return kept


def mentions_to_standoff(mentions: Iterable[EntityMention]) -> str:
    """Standoff export: one tab-separated record per mention."""
    lines = []
    for m in mentions:
        lines.append("\t".join([
            m.doc_id, str(m.span[0]), str(m.span[1]),
            "" if m.entity_id is None else str(m.entity_id),
            m.matched_name, m.chunk_source or "", m.mention_kind,
        ]))
    return "\n".join(lines) + ("\n" if lines else "")
