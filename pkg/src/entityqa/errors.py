"""Shared exception types for file parsing and validation."""


class ParseError(Exception):
    """A malformed record in one of the line-oriented input files."""

    def __init__(self, message: str, *, source: str = "", line: int | None = None):
        self.source = source
        self.line = line
        where = source
        if line is not None:
            where = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class ValidationError(Exception):
    """Structurally well-formed input that violates a documented invariant."""


class ConfigError(Exception):
    """Missing or out-of-range configuration value, or a missing input path."""
