"""Pipeline configuration: a YAML file with a ``paths`` and a ``params``
section, with relative paths resolved against the config file location.
Command-line flags override individual parameters.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields as dataclass_fields
from pathlib import Path

import yaml

from .answering import AnswerSettings, Runtime
from .corpus import load_corpus
from .definitions import (DEFAULT_DEFINITION_PATTERNS, DefinitionConfig,
                          load_phrase_file)
from .errors import ConfigError
from .library import load_library
from .matcher import build_trie
from .ner import load_ne_mapping, load_numeral_lexicon
from .question import (FocusConfig, QuestionResources, load_patterns,
                       load_question_lexicon, load_synset_ne_types)
from .retrieval import load_index
from .taxonomy import load_taxonomy

PATH_KEYS = (
    "taxonomy", "corpus", "manifest", "library", "index",
    "question_lexicon", "patterns", "ambiguous_pronouns",
    "opening_constructions", "synset_ne_types", "ne_mapping",
    "numeral_lexicon", "definition_patterns", "gold_questions", "output_dir",
)

RUNTIME_PATHS = (
    "taxonomy", "corpus", "library", "index", "question_lexicon", "patterns",
    "ambiguous_pronouns", "opening_constructions", "synset_ne_types",
    "ne_mapping", "numeral_lexicon",
)


@dataclass
class PipelineConfig:
    base_dir: Path
    paths: dict[str, Path] = field(default_factory=dict)

    document_count: int = 20
    min_confidence: float = 0.0
    context_strategy: str = "sentence"
    include_title: bool = True
    window_ratio: float = 1.5
    sources: tuple[str, ...] = ("deeper", "ner", "quant")
    fuzzy_max_distance: int = 3
    fuzzy_prefix_length: int = 1
    window_cap: int = 8
    candidate_limit: int = 10
    unit_synset: str | None = None
    bootstrap_iterations: int = 10000
    bootstrap_seed: int | None = None
    document_grid: tuple[int, ...] = (1, 5, 10, 20, 50, 100)
    confidence_grid: tuple[float, ...] = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                          0.6, 0.7, 0.8, 0.9, 1.0)
    workers: int = 0  # 0: use the available parallelism

    def path(self, key: str, *, required: bool = True) -> Path | None:
        value = self.paths.get(key)
        if value is None:
            if required:
                raise ConfigError(f"config is missing the {key!r} path")
            return None
        return value

    def require_inputs(self, keys: tuple[str, ...]) -> None:
        for key in keys:
            path = self.path(key)
            if not path.exists():
                raise ConfigError(f"{key} path does not exist: {path}")

    def settings(self) -> AnswerSettings:
        return AnswerSettings(
            document_count=self.document_count,
            min_confidence=self.min_confidence,
            context_strategy=self.context_strategy,
            include_title=self.include_title,
            window_ratio=self.window_ratio,
            sources=self.sources,
            window_cap=self.window_cap,
            candidate_limit=self.candidate_limit,
        )

    def validate(self) -> None:
        if self.document_count < 1:
            raise ConfigError("document_count must be at least 1")
        if self.context_strategy not in ("sentence", "window"):
            raise ConfigError(f"unknown context strategy {self.context_strategy!r}")
        if self.window_ratio <= 0:
            raise ConfigError("window_ratio must be positive")
        if self.fuzzy_prefix_length < 1:
            raise ConfigError("fuzzy_prefix_length must be at least 1")
        if self.fuzzy_max_distance < 0:
            raise ConfigError("fuzzy_max_distance must not be negative")
        if self.window_cap < 1:
            raise ConfigError("window_cap must be at least 1")
        unknown = set(self.sources) - {"deeper", "ner", "quant"}
        if unknown:
            raise ConfigError(f"unknown mention sources: {sorted(unknown)}")


_PARAM_FIELDS = {
    f.name for f in dataclass_fields(PipelineConfig)
    if f.name not in ("base_dir", "paths")
}

_INT_PARAMS = ("document_count", "fuzzy_max_distance", "fuzzy_prefix_length",
               "window_cap", "candidate_limit", "bootstrap_iterations",
               "bootstrap_seed", "workers")
_FLOAT_PARAMS = ("min_confidence", "window_ratio")
_BOOL_PARAMS = ("include_title",)
_STR_PARAMS = ("context_strategy", "unit_synset")


def _coerce(key: str, value):
    try:
        if key in _INT_PARAMS:
            return int(value)
        if key in _FLOAT_PARAMS:
            return float(value)
        if key in _BOOL_PARAMS:
            if isinstance(value, bool):
                return value
            raise ValueError("expected a boolean")
        if key in _STR_PARAMS:
            return str(value)
        if key == "sources":
            if isinstance(value, str):
                return tuple(part.strip() for part in value.split(",")
                             if part.strip())
            return tuple(str(v) for v in value)
        if key == "document_grid":
            return tuple(int(v) for v in value)
        if key == "confidence_grid":
            return tuple(float(v) for v in value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for parameter {key!r}: {value!r} ({exc})") from exc
    return value


def load_config(path: str | Path, overrides: dict | None = None) -> PipelineConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file does not exist: {path}")
    data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    base_dir = path.parent.resolve()

    raw_paths = data.get("paths", {}) or {}
    paths: dict[str, Path] = {}
    for key, value in raw_paths.items():
        if key not in PATH_KEYS:
            raise ConfigError(f"unknown path key {key!r} in {path}")
        paths[key] = (base_dir / value).resolve()

    config = PipelineConfig(base_dir=base_dir, paths=paths)
    params = dict(data.get("params", {}) or {})
    params.update(overrides or {})
    for key, value in params.items():
        if key not in _PARAM_FIELDS:
            raise ConfigError(f"unknown parameter {key!r} in {path}")
        if value is None:
            continue
        setattr(config, key, _coerce(key, value))
    config.validate()
    return config


def load_definition_config(config: PipelineConfig) -> DefinitionConfig:
    patterns_path = config.path("definition_patterns", required=False)
    openings_path = config.path("opening_constructions", required=False)
    patterns = (load_phrase_file(patterns_path) if patterns_path
                else DEFAULT_DEFINITION_PATTERNS)
    prefixes = load_phrase_file(openings_path) if openings_path else ()
    return DefinitionConfig.from_phrases(patterns, prefixes)


def load_runtime(config: PipelineConfig) -> Runtime:
    """Load every resource the answering pipeline needs."""
    config.require_inputs(RUNTIME_PATHS)
    graph = load_taxonomy(config.path("taxonomy"))
    library = load_library(config.path("library"))
    index = load_index(config.path("index"))
    documents = {doc.doc_id: doc for doc in load_corpus(config.path("corpus"))}
    lexicon = load_question_lexicon(config.path("question_lexicon"))
    patterns = load_patterns(config.path("patterns"))
    pronouns = load_phrase_file(config.path("ambiguous_pronouns"))
    openings = load_phrase_file(config.path("opening_constructions"))
    focus_config = FocusConfig.build(
        pronouns, openings, load_synset_ne_types(config.path("synset_ne_types"))
    )
    return Runtime(
        graph=graph,
        library=library,
        trie=build_trie(library),
        index=index,
        documents=documents,
        question_resources=QuestionResources(
            lexicon=lexicon,
            patterns=patterns,
            focus_config=focus_config,
            graph=graph,
            fuzzy_max_distance=config.fuzzy_max_distance,
            fuzzy_prefix_length=config.fuzzy_prefix_length,
        ),
        ne_mapping=load_ne_mapping(config.path("ne_mapping")),
        numerals=load_numeral_lexicon(config.path("numeral_lexicon")),
        unit_synset_id=config.unit_synset,
        settings=config.settings(),
    )
