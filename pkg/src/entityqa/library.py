"""Entity library: built offline from definition paragraphs, persisted as a
versioned line-delimited file.

Build steps over a corpus of articles, disambiguation pages and redirects:

1. Every article whose first paragraph yields at least one synset becomes an
   entity (main name = article title).
2. Every disambiguation item (one paragraph per item) is interpreted; an
   item whose defined name equals an existing entity name extends that
   entity's synsets and adds the page title as an alias, any other item
   with a readable name becomes a new entity.
3. Redirect page titles become aliases of the entity their target names.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import AnnotatedDocument, first_paragraph, iter_paragraphs
from .definitions import DefinitionConfig, interpret_definition
from .errors import ParseError, ValidationError
from .taxonomy import SynsetId, TaxonomyGraph

LIBRARY_FORMAT = "entityqa-library"
LIBRARY_VERSION = 1


@dataclass
class Entity:
    entity_id: int
    main_name: str
    aliases: set[str]
    description_url: str
    synset_ids: set[SynsetId]

    def names(self) -> set[str]:
        return {self.main_name} | self.aliases


@dataclass
class EntityLibrary:
    entities: list[Entity] = field(default_factory=list)
    name_index: dict[str, list[int]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entities)

    def by_id(self, entity_id: int) -> Entity:
        entity = self._id_table().get(entity_id)
        if entity is None:
            raise KeyError(f"no entity with id {entity_id}")
        return entity

    def _id_table(self) -> dict[int, Entity]:
        cache = getattr(self, "_ids", None)
        if cache is None or len(cache) != len(self.entities):
            cache = {e.entity_id: e for e in self.entities}
            self._ids = cache
        return cache

    def lookup(self, name: str) -> list[Entity]:
        return [self.by_id(i) for i in self.name_index.get(name, [])]

    def add_name(self, name: str, entity_id: int) -> None:
        ids = self.name_index.setdefault(name, [])
        if entity_id not in ids:
            ids.append(entity_id)
            ids.sort()

    def validate(self) -> None:
        seen_ids = set()
        expected: dict[str, set[int]] = {}
        for entity in self.entities:
            if entity.entity_id in seen_ids:
                raise ValidationError(f"duplicate entity id {entity.entity_id}")
            seen_ids.add(entity.entity_id)
            if entity.main_name in entity.aliases:
                raise ValidationError(
                    f"entity {entity.entity_id}: main name listed as alias"
                )
            for name in entity.names():
                expected.setdefault(name, set()).add(entity.entity_id)
        actual = {name: set(ids) for name, ids in self.name_index.items()}
        if expected != actual:
            raise ValidationError("name index out of sync with entity names")


@dataclass
class BuildReport:
    articles: int = 0
    definable_articles: int = 0
    skipped_no_pattern: list[str] = field(default_factory=list)
    skipped_no_synsets: list[str] = field(default_factory=list)
    duplicate_titles: list[str] = field(default_factory=list)
    missing_redirect_targets: list[str] = field(default_factory=list)
    unreadable_items: list[str] = field(default_factory=list)
    alias_origins: dict[str, list[str]] = field(default_factory=dict)

    def note_alias(self, alias: str, origin: str) -> None:
        self.alias_origins.setdefault(alias, []).append(origin)

    def to_json(self) -> str:
        return json.dumps(self.__dict__, ensure_ascii=False, indent=2,
                          sort_keys=True)


def build_library(
    corpus: Iterable[AnnotatedDocument],
    graph: TaxonomyGraph,
    config: DefinitionConfig | None = None,
) -> tuple[EntityLibrary, BuildReport]:
    config = config or DefinitionConfig.default()
    report = BuildReport()
    library = EntityLibrary()
    articles: list[AnnotatedDocument] = []
    disambiguations: list[AnnotatedDocument] = []
    redirects: list[AnnotatedDocument] = []
    for doc in corpus:
        {"article": articles,
         "disambiguation": disambiguations,
         "redirect": redirects}[doc.page_kind].append(doc)

    next_id = 1
    title_uses: dict[str, int] = {}

    def new_entity(name: str, url: str, synsets: set[SynsetId]) -> Entity:
        nonlocal next_id
        entity = Entity(entity_id=next_id, main_name=name, aliases=set(),
                        description_url=url, synset_ids=set(synsets))
        next_id += 1
        library.entities.append(entity)
        library.add_name(name, entity.entity_id)
        return entity

    def add_alias(entity: Entity, alias: str, origin: str) -> None:
        if alias == entity.main_name or alias in entity.aliases:
            return
        entity.aliases.add(alias)
        library.add_name(alias, entity.entity_id)
        report.note_alias(alias, origin)

    # Step 1: articles.
    report.articles = len(articles)
    for doc in articles:
        reading = interpret_definition(doc, first_paragraph(doc), graph, config)
        if not reading.matched:
            report.skipped_no_pattern.append(doc.title)
            continue
        if not reading.synsets:
            report.skipped_no_synsets.append(doc.title)
            continue
        report.definable_articles += 1
        name = doc.title
        uses = title_uses.get(name, 0) + 1
        title_uses[name] = uses
        if uses > 1:
            name = f"{name} ({uses})"
            report.duplicate_titles.append(doc.title)
        new_entity(name, f"corpus://{doc.doc_id}", set(reading.synsets))

    # Step 2: disambiguation pages, one item per paragraph.
    for doc in disambiguations:
        for item_span in iter_paragraphs(doc):
            if item_span[0] == item_span[1]:
                continue
            reading = interpret_definition(doc, item_span, graph, config)
            if not reading.matched or not reading.defined_name:
                report.unreadable_items.append(
                    f"{doc.title}: {doc.surface_text(item_span)}"
                )
                continue
            existing = library.lookup(reading.defined_name)
            if existing:
                for entity in existing:
                    entity.synset_ids |= set(reading.synsets)
                    add_alias(entity, doc.title, f"disambiguation:{doc.doc_id}")
            else:
                new_entity(reading.defined_name, f"corpus://{doc.doc_id}",
                           set(reading.synsets))

    # Step 3 (aliases from redirects; saving is the caller's concern).
    for doc in redirects:
        assert doc.redirect_target is not None
        targets = library.lookup(doc.redirect_target)
        if not targets:
            report.missing_redirect_targets.append(
                f"{doc.title} -> {doc.redirect_target}"
            )
            continue
        for entity in targets:
            add_alias(entity, doc.title, f"redirect:{doc.doc_id}")

    library.validate()
    return library, report


# --- persistence ------------------------------------------------------------

def _entity_record(entity: Entity) -> str:
    return json.dumps(
        {
            "id": entity.entity_id,
            "mainName": entity.main_name,
            "aliases": sorted(entity.aliases),
            "url": entity.description_url,
            "synsets": sorted(entity.synset_ids),
        },
        ensure_ascii=False, separators=(",", ":"),
    )


def save_library(
    library: EntityLibrary,
    path: str | Path,
    *,
    corpus_digest: str = "unknown",
    taxonomy_digest: str = "unknown",
) -> None:
    body = "".join(_entity_record(e) + "\n" for e in library.entities)
    header = json.dumps(
        {
            "format": LIBRARY_FORMAT,
            "version": LIBRARY_VERSION,
            "corpusDigest": corpus_digest,
            "taxonomyDigest": taxonomy_digest,
            "entities": len(library.entities),
            "sha256": hashlib.sha256(body.encode("utf-8")).hexdigest(),
        },
        ensure_ascii=False, separators=(",", ":"),
    )
    Path(path).write_text(header + "\n" + body, encoding="utf-8")


def load_library(path: str | Path) -> EntityLibrary:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    newline = text.find("\n")
    if newline < 0:
        raise ParseError("missing header line", source=str(path), line=1)
    try:
        header = json.loads(text[:newline])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad header ({exc.msg})", source=str(path), line=1) from exc
    if header.get("format") != LIBRARY_FORMAT:
        raise ValidationError(f"{path}: not an entity library file")
    if header.get("version") != LIBRARY_VERSION:
        raise ValidationError(
            f"{path}: unsupported library version {header.get('version')!r} "
            f"(expected {LIBRARY_VERSION})"
        )
    body = text[newline + 1:]
    digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
    if digest != header.get("sha256"):
        raise ValidationError(f"{path}: checksum mismatch (file truncated or edited)")

    library = EntityLibrary()
    for lineno, raw in enumerate(body.splitlines(), start=2):
        try:
            record = json.loads(raw)
            entity = Entity(
                entity_id=int(record["id"]),
                main_name=record["mainName"],
                aliases=set(record["aliases"]),
                description_url=record["url"],
                synset_ids=set(record["synsets"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad entity record ({exc})",
                             source=str(path), line=lineno) from exc
        library.entities.append(entity)
        for name in entity.names():
            library.add_name(name, entity.entity_id)
    if len(library.entities) != header.get("entities"):
        raise ValidationError(f"{path}: entity count does not match header")
    library.validate()
    return library


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --- quality ----------------------------------------------------------------

@dataclass(frozen=True)
class GoldEntityRecord:
    article: str
    entity_expected: bool
    synsets: frozenset[SynsetId] = frozenset()


@dataclass(frozen=True)
class QualityReport:
    per_entity_recall: float
    per_synset_precision: float | None
    per_synset_recall: float | None
    sense_only_mismatches: int
    entities_expected: int
    entities_found: int


def _lemmas_of(graph: TaxonomyGraph, synset_id: SynsetId) -> set[str]:
    return {lemma for lemma, _ in graph.require(synset_id).lexemes}


def library_quality(
    library: EntityLibrary,
    gold: Iterable[GoldEntityRecord],
    graph: TaxonomyGraph,
    known_titles: set[str] | None = None,
) -> QualityReport:
    """Compare built entities against a manually annotated article sample."""
    expected = 0
    found = 0
    gold_synsets = 0
    lib_synsets = 0
    shared = 0
    sense_only = 0
    for record in gold:
        if known_titles is not None and record.article not in known_titles:
            raise ValidationError(f"gold references unknown article {record.article!r}")
        if not record.entity_expected:
            continue
        expected += 1
        matches = [e for e in library.lookup(record.article)
                   if e.main_name == record.article]
        if not matches:
            continue
        found += 1
        entity = matches[0]
        gold_synsets += len(record.synsets)
        lib_synsets += len(entity.synset_ids)
        shared += len(record.synsets & entity.synset_ids)
        for sid in entity.synset_ids - record.synsets:
            lemmas = _lemmas_of(graph, sid)
            if any(lemmas & _lemmas_of(graph, g) for g in record.synsets - entity.synset_ids):
                sense_only += 1
    return QualityReport(
        per_entity_recall=found / expected if expected else 1.0,
        per_synset_precision=shared / lib_synsets if lib_synsets else None,
        per_synset_recall=shared / gold_synsets if gold_synsets else None,
        sense_only_mismatches=sense_only,
        entities_expected=expected,
        entities_found=found,
    )


def load_gold_entities(path: str | Path) -> list[GoldEntityRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
                records.append(GoldEntityRecord(
                    article=data["article"],
                    entity_expected=bool(data["entityExpected"]),
                    synsets=frozenset(data.get("synsets", [])),
                ))
            except (json.JSONDecodeError, KeyError) as exc:
                raise ParseError(f"bad gold entity record ({exc})",
                                 source=str(path), line=lineno) from exc
    return records
