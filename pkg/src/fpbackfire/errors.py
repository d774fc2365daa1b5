"""Exception types raised across the package.

Every error a caller can act on has its own class so the CLI and tests can
distinguish failure modes without string matching.
"""

from __future__ import annotations


class BackfireError(Exception):
    """Base class for all errors raised by this package."""


class InvalidRatioError(BackfireError):
    """A conversion ratio was zero or negative."""


class UnknownLanguageError(BackfireError):
    """A language name could not be resolved against the programming table."""

    def __init__(self, name: str):
        super().__init__(f"unknown programming language: {name!r}")
        self.name = name


class ParseError(BackfireError):
    """A file failed to parse; `line` is the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConfigurationError(BackfireError):
    """An invalid configuration value (boundaries, overrides, peaks, ...)."""


class OutOfRangeError(BackfireError):
    """A language level outside the interval covered by the fuzzy levels."""

    def __init__(self, level: float, low: float, high: float):
        super().__init__(
            f"language level {level} is outside the covered interval ({low}, {high}]"
        )
        self.level = level
        self.covered = (low, high)


class EmptyDatasetError(BackfireError):
    """An operation that needs at least one record or sample got none."""


class RecordValidationError(BackfireError):
    """A project record carried non-positive UFP or SLOC; names the record."""

    def __init__(self, record_id: str, message: str):
        super().__init__(f"record {record_id!r}: {message}")
        self.record_id = record_id


class StaleWeightsError(BackfireError):
    """Calibrated weights were produced against a different fuzzy level set."""


class UndefinedMetricError(BackfireError):
    """A relative-error metric was asked to divide by a non-positive value."""


class IncompatibleReportError(BackfireError):
    """Two evaluation reports cannot be compared (different sample counts)."""


class UnknownExperimentError(BackfireError):
    """Experiment id outside 1..7."""
