"""Self-contained inverted index with a surface and a base-form layer,
fuzzy term expansion, OR-query ranked search and the scaled-IDF weight
table used by context scoring.

Ranking is additive: a document scores the sum, over query terms, of the
term's scaled IDF if any fuzzy expansion of the term occurs in the document
(in either layer). Terms are lowercased on both sides; IDF is computed on
the base-form layer only, and an unseen term counts as maximally rare
(weight 1).
"""

from __future__ import annotations

import bisect
import gzip
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import AnnotatedDocument
from .errors import ConfigError, ParseError, ValidationError

INDEX_FORMAT = "entityqa-index"
INDEX_VERSION = 1


@dataclass(frozen=True)
class SearchQuery:
    terms: tuple[str, ...]
    match_mode: str = "fuzzy"  # exact | fuzzy
    max_distance: int = 3
    prefix_length: int = 1

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValidationError("a search query needs at least one term")
        if self.match_mode not in ("exact", "fuzzy"):
            raise ValidationError(f"unknown match mode {self.match_mode!r}")


@dataclass
class Index:
    doc_ids: list[str] = field(default_factory=list)
    # term -> [(doc position, term frequency)], ascending doc position
    surface_postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    base_postings: dict[str, list[tuple[int, int]]] = field(default_factory=dict)
    document_frequency: dict[str, int] = field(default_factory=dict)
    _vocab_cache: dict[str, list[str]] = field(default_factory=dict, repr=False)

    @property
    def doc_count(self) -> int:
        return len(self.doc_ids)

    def vocabulary(self, layer: str = "base") -> list[str]:
        if layer not in ("base", "surface"):
            raise ConfigError(f"unknown index layer {layer!r}")
        cached = self._vocab_cache.get(layer)
        if cached is None:
            postings = self.base_postings if layer == "base" else self.surface_postings
            cached = sorted(postings)
            self._vocab_cache[layer] = cached
        return cached

    def postings(self, term: str, layer: str = "base") -> list[tuple[int, int]]:
        table = self.base_postings if layer == "base" else self.surface_postings
        return table.get(term, [])


def _doc_terms(doc: AnnotatedDocument) -> tuple[dict[str, int], dict[str, int]]:
    surface: dict[str, int] = {}
    base: dict[str, int] = {}
    for segment in doc.segments:
        if not segment.is_content:
            continue
        s = segment.surface.lower()
        b = segment.lemma.lower()
        surface[s] = surface.get(s, 0) + 1
        base[b] = base.get(b, 0) + 1
    return surface, base


def build_index(corpus: Iterable[AnnotatedDocument]) -> Index:
    index = Index()
    for position, doc in enumerate(corpus):
        index.doc_ids.append(doc.doc_id)
        surface, base = _doc_terms(doc)
        for term, tf in surface.items():
            index.surface_postings.setdefault(term, []).append((position, tf))
        for term, tf in base.items():
            index.base_postings.setdefault(term, []).append((position, tf))
            index.document_frequency[term] = index.document_frequency.get(term, 0) + 1
    return index


def idf_weight(index: Index, term: str) -> float:
    """Scaled IDF in [0, 1]: log(|D|/df) normalized by the vocabulary
    maximum; unseen terms count as maximally rare."""
    n = index.doc_count
    if n == 0:
        raise ValidationError("cannot weight terms against an empty index")
    df = index.document_frequency.get(term.lower())
    if df is None:
        return 1.0
    max_log = _max_log(index)
    if max_log == 0.0:
        return 0.0
    return math.log(n / df) / max_log


def _max_log(index: Index) -> float:
    cached = getattr(index, "_max_log", None)
    if cached is None:
        n = index.doc_count
        cached = max(
            (math.log(n / df) for df in index.document_frequency.values()),
            default=0.0,
        )
        index._max_log = cached
    return cached


def edit_distance(a: str, b: str) -> int:
    """Unit-cost Levenshtein distance."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


def fuzzy_expand(
    term: str,
    index: Index,
    max_distance: int = 3,
    prefix_length: int = 1,
    layer: str = "base",
) -> set[str]:
    """Vocabulary terms sharing the fixed prefix and within the edit
    distance budget."""
    if prefix_length < 1:
        raise ConfigError("prefix length must be at least 1")
    vocab = index.vocabulary(layer)
    prefix = term[:prefix_length]
    lo = bisect.bisect_left(vocab, prefix)
    out: set[str] = set()
    for i in range(lo, len(vocab)):
        candidate = vocab[i]
        if not candidate.startswith(prefix):
            break
        if candidate[:prefix_length] != term[:prefix_length]:
            continue
        if edit_distance(term, candidate) <= max_distance:
            out.add(candidate)
    return out


def _expansions(index: Index, query: SearchQuery, term: str, layer: str) -> set[str]:
    if query.match_mode == "exact":
        return {term} if index.postings(term, layer) else set()
    return fuzzy_expand(term, index, query.max_distance,
                        query.prefix_length, layer)


def search(
    index: Index,
    query: SearchQuery,
    n: int,
    layers: tuple[str, ...] = ("base", "surface"),
) -> list[tuple[str, float]]:
    """Top-``n`` documents by summed per-term scaled IDF; a term counts for
    a document when any of its expansions occurs there in any searched
    layer. Ties break by ascending document id."""
    if n < 1:
        raise ConfigError("result size must be at least 1")
    scores: dict[int, float] = {}
    for raw_term in dict.fromkeys(query.terms):
        term = raw_term.lower()
        docs: set[int] = set()
        for layer in layers:
            for expansion in _expansions(index, query, term, layer):
                docs.update(pos for pos, _ in index.postings(expansion, layer))
        if not docs:
            continue
        weight = idf_weight(index, term)
        for position in docs:
            scores[position] = scores.get(position, 0.0) + weight
    ranked = sorted(
        ((index.doc_ids[position], score) for position, score in scores.items()),
        key=lambda item: (-item[1], item[0]),
    )
    return ranked[:n]


# --- persistence ---------------------------------------------------------------

def save_index(
    index: Index,
    path: str | Path,
    *,
    corpus_digest: str = "unknown",
) -> None:
    payload = json.dumps(
        {
            "docIds": index.doc_ids,
            "surface": {t: p for t, p in sorted(index.surface_postings.items())},
            "base": {t: p for t, p in sorted(index.base_postings.items())},
            "df": {t: df for t, df in sorted(index.document_frequency.items())},
        },
        ensure_ascii=False, separators=(",", ":"),
    ).encode("utf-8")
    header = json.dumps(
        {
            "format": INDEX_FORMAT,
            "version": INDEX_VERSION,
            "corpusDigest": corpus_digest,
            "sha256": hashlib.sha256(payload).hexdigest(),
        },
        ensure_ascii=False, separators=(",", ":"),
    ).encode("utf-8")
    with open(path, "wb") as handle:
        handle.write(header + b"\n")
        handle.write(gzip.compress(payload, mtime=0))


def load_index(path: str | Path) -> Index:
    path = Path(path)
    blob = path.read_bytes()
    newline = blob.find(b"\n")
    if newline < 0:
        raise ParseError("missing index header", source=str(path))
    try:
        header = json.loads(blob[:newline])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad index header ({exc.msg})", source=str(path)) from exc
    if header.get("format") != INDEX_FORMAT:
        raise ValidationError(f"{path}: not an index file")
    if header.get("version") != INDEX_VERSION:
        raise ValidationError(
            f"{path}: unsupported index version {header.get('version')!r}"
        )
    try:
        payload = gzip.decompress(blob[newline + 1:])
    except (OSError, EOFError) as exc:
        raise ValidationError(f"{path}: corrupt index payload ({exc})") from exc
    if hashlib.sha256(payload).hexdigest() != header.get("sha256"):
        raise ValidationError(f"{path}: checksum mismatch (file truncated or edited)")
    data = json.loads(payload)
    return Index(
        doc_ids=list(data["docIds"]),
        surface_postings={t: [tuple(p) for p in ps]
                          for t, ps in data["surface"].items()},
        base_postings={t: [tuple(p) for p in ps]
                       for t, ps in data["base"].items()},
        document_frequency={t: int(df) for t, df in data["df"].items()},
    )
