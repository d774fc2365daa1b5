"""Backfiring arithmetic and the programming-language table.

Backfiring converts between function points and source lines of code through
a per-language ratio (SLOC per function point). Ratios live in a programming
table that maps each language to its level and low/mean/high conversion
values. The built-in table ships the eight SPR sample rows used throughout
this package as defaults.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import (
    ConfigurationError,
    InvalidRatioError,
    ParseError,
    RecordValidationError,
    UnknownLanguageError,
)

TABLE_HEADER = ["name", "level", "low", "mean", "high"]


@dataclass(frozen=True)
class LanguageEntry:
    """One programming-table row: a language, its level, and SLOC/FP bounds."""

    name: str
    level: float
    low: float
    mean: float
    high: float

    def __post_init__(self):
        if not self.name or not self.name.strip():
            raise ConfigurationError("language name must be non-empty")
        if self.level <= 0:
            raise ConfigurationError(f"{self.name}: language level must be > 0")
        if not 0 < self.low <= self.mean <= self.high:
            raise ConfigurationError(
                f"{self.name}: SLOC/FP bounds must satisfy 0 < low <= mean <= high, "
                f"got low={self.low} mean={self.mean} high={self.high}"
            )


@dataclass(frozen=True)
class ProgrammingTable:
    """Ordered collection of language entries, unique by name (case-insensitive)."""

    entries: tuple[LanguageEntry, ...]

    def __post_init__(self):
        if not self.entries:
            raise ConfigurationError("programming table must contain at least one entry")
        seen: set[str] = set()
        for entry in self.entries:
            key = entry.name.strip().casefold()
            if key in seen:
                raise ConfigurationError(f"duplicate language name: {entry.name!r}")
            seen.add(key)

    def find(self, name: str) -> LanguageEntry:
        """Look up an entry by name, case-insensitively and ignoring edge whitespace."""
        key = name.strip().casefold()
        for entry in self.entries:
            if entry.name.strip().casefold() == key:
                return entry
        raise UnknownLanguageError(name)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ProjectRecord:
    """One software project: language, unadjusted function points, actual SLOC."""

    id: str
    language: str
    ufp: float
    sloc: float

    def __post_init__(self):
        if not self.id:
            raise RecordValidationError("<missing>", "record id must be non-empty")
        if self.ufp <= 0:
            raise RecordValidationError(self.id, f"ufp must be > 0, got {self.ufp}")
        if self.sloc <= 0:
            raise RecordValidationError(self.id, f"sloc must be > 0, got {self.sloc}")


def backfire(fp: float, ratio: float) -> float:
    """Convert function points to SLOC: fp * ratio.

    `ratio` is the conversion value in SLOC per function point and must be
    positive; `fp` must be non-negative.
    """
    if ratio <= 0:
        raise InvalidRatioError(f"conversion ratio must be > 0, got {ratio}")
    if fp < 0:
        raise ValueError(f"function points must be >= 0, got {fp}")
    return fp * ratio


def reverse_backfire(sloc: float, ratio: float) -> float:
    """Convert SLOC back to function points: sloc / ratio."""
    if ratio <= 0:
        raise InvalidRatioError(f"conversion ratio must be > 0, got {ratio}")
    if sloc < 0:
        raise ValueError(f"sloc must be >= 0, got {sloc}")
    return sloc / ratio


def level_for_language(table: ProgrammingTable, name: str) -> float:
    """Return the language level for `name`, matched case-insensitively."""
    return table.find(name).level


# SPR sample programming table: language, level, low/mean/high SLOC per FP.
_DEFAULT_ROWS = [
    ("Basic Assembly", 1.0, 213, 320, 427),
    ("C", 2.5, 21, 128, 235),
    ("Cobol", 3.0, 65, 107, 170),
    ("3rd Generation", 4.0, 45, 80, 125),
    ("C++", 6.0, 30, 53, 125),
    ("Java", 9.0, 20, 36, 51),
    ("4th Generation", 16.0, 16, 20, 24),
    ("SQL", 25.0, 8, 13, 17),
]

DEFAULT_PROGRAMMING_TABLE = ProgrammingTable(
    tuple(LanguageEntry(n, lv, float(lo), float(m), float(hi)) for n, lv, lo, m, hi in _DEFAULT_ROWS)
)


def default_programming_table() -> ProgrammingTable:
    """The built-in programming table (eight SPR sample rows)."""
    return DEFAULT_PROGRAMMING_TABLE


def _parse_float(value: str, field: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{field} is not a number: {value!r}", line) from None


def load_programming_table(source: str | Path | None = None) -> ProgrammingTable:
    """Load a programming table from CSV, or return the built-in default.

    The file format is UTF-8 CSV with header ``name,level,low,mean,high``,
    decimal point '.', no thousands separators. Row-level problems raise
    :class:`ParseError` carrying the 1-based line number.
    """
    if source is None:
        return DEFAULT_PROGRAMMING_TABLE
    path = Path(source)
    with path.open(newline="", encoding="utf-8") as fh:
        return parse_programming_table(fh)


def parse_programming_table(lines: Iterable[str]) -> ProgrammingTable:
    """Parse programming-table CSV from an iterable of text lines."""
    reader = csv.reader(lines)
    rows = list(reader)
    if not rows:
        raise ParseError("empty programming table file")
    if [c.strip() for c in rows[0]] != TABLE_HEADER:
        raise ParseError(f"expected header {','.join(TABLE_HEADER)!r}", line=1)

    entries: list[LanguageEntry] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 5:
            raise ParseError(f"expected 5 fields, got {len(row)}", lineno)
        name = row[0].strip()
        values = [_parse_float(row[i], TABLE_HEADER[i], lineno) for i in range(1, 5)]
        try:
            entry = LanguageEntry(name, *values)
        except ConfigurationError as exc:
            raise ParseError(str(exc), lineno) from None
        key = entry.name.casefold()
        if key in seen:
            raise ParseError(f"duplicate language name: {name!r}", lineno)
        seen.add(key)
        entries.append(entry)
    if not entries:
        raise ParseError("programming table contains no data rows")
    return ProgrammingTable(tuple(entries))
