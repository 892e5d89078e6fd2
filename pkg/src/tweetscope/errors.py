"""Exception hierarchy shared across the engine.

The CLI maps these to exit codes: ConfigError -> 2, DataError -> 3,
DependencyError -> 4.
"""


class EngineError(Exception):
    """Base class for all engine errors."""


class ConfigError(EngineError):
    """Invalid configuration value, path, or parameter combination."""


class DataError(EngineError):
    """Input data violates a contract (bad records, empty corpus, ...)."""


class ParseError(DataError):
    """A record could not be parsed; carries the 1-based line number."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class CoverageError(DataError):
    """A precomputed provider does not cover every requested id."""

    def __init__(self, message, missing_ids=()):
        super().__init__(message)
        self.missing_ids = list(missing_ids)


class ShapeError(DataError):
    """Vector/matrix dimensions do not match the model."""


class DependencyError(EngineError):
    """A pipeline stage was requested without its upstream artifacts."""
