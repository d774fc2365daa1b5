"""Fuzzy programming-language levels and conversion-ratio inference.

Adjacent language levels are grouped into fuzzy levels, each carrying a
conversion ratio (SLOC/FP) and clamp bounds. A language level is fuzzified
against triangular input sets anchored at each level's top, one rule per
level maps input set i to output set i, and the truncated output sets are
max-aggregated and defuzzified by center of gravity to produce a crisp
conversion ratio.

Geometry used throughout (and mirrored by the test oracles):

* Input sets form a Ruspini partition over the anchors: level i peaks at
  anchor_i with feet at the neighboring anchors; the first and last levels
  are shoulders (membership 1 outward). Memberships at any in-range level
  sum to 1 with at most two nonzero entries.
* Output sets are symmetric triangles centered at each level's ratio with
  half-width = the distance to the nearest adjacent ratio, floored at
  ``MIN_OUTPUT_HALF_WIDTH`` so tied ratios keep a visible set. A set with no
  neighbor (single-level configurations) uses a quarter of its own ratio.
* The defuzzification universe spans exactly the union of the output-set
  supports, sampled at ``GRID_POINTS`` uniform points; the centroid is
  sum(y * mu(y)) / sum(mu(y)) over the samples.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass
from pathlib import Path
from statistics import fmean
from typing import Iterable, Sequence

import numpy as np

from .conversion import DEFAULT_PROGRAMMING_TABLE, ProgrammingTable
from .errors import ConfigurationError, OutOfRangeError, ParseError

GRID_POINTS = 1001
MIN_OUTPUT_HALF_WIDTH = 1.0

LEVELS_HEADER = ["index", "range_low", "range_high", "avg_ratio", "clamp_min", "clamp_max"]

# Default fuzzy-level configuration: 19 ranges over language levels (0..50]
# with their average SLOC/FP.
_DEFAULT_BOUNDARIES = [0.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 8.5,
                       9.0, 9.5, 11.0, 14.0, 16.0, 20.0, 23.0, 25.0, 27.0, 50.0]
_DEFAULT_AVG_RATIOS = [128.0, 107.0, 91.0, 81.0, 67.0, 53.0, 46.0, 40.0, 38.0, 36.0,
                       34.0, 29.0, 23.0, 20.0, 16.0, 14.0, 13.0, 12.0, 6.0]


@dataclass(frozen=True)
class MembershipFunction:
    """Triangular or shoulder membership function.

    A shoulder is a triangle with membership held at 1 beyond the peak on its
    open side: left shoulder when left_foot == peak, right shoulder when
    right_foot == peak.
    """

    kind: str  # "triangle" or "shoulder"
    left_foot: float
    peak: float
    right_foot: float

    def __post_init__(self):
        if self.kind not in ("triangle", "shoulder"):
            raise ConfigurationError(f"unknown membership kind: {self.kind!r}")
        if not self.left_foot <= self.peak <= self.right_foot:
            raise ConfigurationError(
                f"feet must bracket the peak: {self.left_foot}, {self.peak}, {self.right_foot}"
            )
        if self.kind == "shoulder" and self.left_foot != self.peak and self.right_foot != self.peak:
            raise ConfigurationError("a shoulder must have one foot at its peak")
        if self.kind == "triangle" and (self.left_foot == self.peak or self.right_foot == self.peak):
            raise ConfigurationError("a triangle needs nonzero width on both sides")

    def value(self, x: float) -> float:
        """Degree of membership of x, in [0, 1]."""
        if x < self.peak:
            if self.left_foot == self.peak:  # shoulder, open to the left
                return 1.0
            if x <= self.left_foot:
                return 0.0
            return (x - self.left_foot) / (self.peak - self.left_foot)
        if x > self.peak:
            if self.right_foot == self.peak:  # shoulder, open to the right
                return 1.0
            if x >= self.right_foot:
                return 0.0
            return (self.right_foot - x) / (self.right_foot - self.peak)
        return 1.0


@dataclass(frozen=True)
class FuzzyLevel:
    """One fuzzy programming-language level.

    Covers the half-open language-level range (range_low, range_high], peaks
    at `anchor`, and carries the level's conversion ratio plus the clamp
    bounds that constrain calibration.
    """

    index: int
    range_low: float
    range_high: float
    anchor: float
    avg_ratio: float
    clamp_min: float
    clamp_max: float

    def __post_init__(self):
        if self.index < 1:
            raise ConfigurationError(f"level index must be 1-based, got {self.index}")
        if not self.range_low < self.range_high:
            raise ConfigurationError(
                f"level {self.index}: range_low must be < range_high, "
                f"got ({self.range_low}, {self.range_high}]"
            )
        if not self.range_low < self.anchor <= self.range_high:
            raise ConfigurationError(
                f"level {self.index}: anchor {self.anchor} outside "
                f"({self.range_low}, {self.range_high}]"
            )
        if not 0 < self.clamp_min <= self.avg_ratio <= self.clamp_max:
            raise ConfigurationError(
                f"level {self.index}: need 0 < clamp_min <= avg_ratio <= clamp_max, "
                f"got {self.clamp_min}, {self.avg_ratio}, {self.clamp_max}"
            )

    def contains(self, language_level: float) -> bool:
        return self.range_low < language_level <= self.range_high


class FuzzyLevelSet:
    """Ordered, contiguous fuzzy levels covering one language-level interval."""

    def __init__(self, levels: Iterable[FuzzyLevel]):
        levels = tuple(levels)
        if not levels:
            raise ConfigurationError("a fuzzy level set needs at least one level")
        for i, level in enumerate(levels, start=1):
            if level.index != i:
                raise ConfigurationError(
                    f"level indexes must run 1..n in order, got {level.index} at position {i}"
                )
        for a, b in zip(levels, levels[1:]):
            if a.range_high != b.range_low:
                raise ConfigurationError(
                    f"ranges must be contiguous: level {a.index} ends at {a.range_high}, "
                    f"level {b.index} starts at {b.range_low}"
                )
            if not a.anchor < b.anchor:
                raise ConfigurationError(
                    f"anchors must be strictly increasing at level {b.index}"
                )
        self._levels = levels

    @property
    def levels(self) -> tuple[FuzzyLevel, ...]:
        return self._levels

    @property
    def anchors(self) -> tuple[float, ...]:
        return tuple(level.anchor for level in self._levels)

    @property
    def avg_ratios(self) -> tuple[float, ...]:
        return tuple(level.avg_ratio for level in self._levels)

    @property
    def coverage(self) -> tuple[float, float]:
        """The half-open interval of language levels covered: (low, high]."""
        return self._levels[0].range_low, self._levels[-1].range_high

    def __len__(self) -> int:
        return len(self._levels)

    def __iter__(self):
        return iter(self._levels)

    def __getitem__(self, i: int) -> FuzzyLevel:
        return self._levels[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, FuzzyLevelSet) and self._levels == other._levels

    def __hash__(self) -> int:
        return hash(self._levels)

    def __repr__(self) -> str:
        return f"FuzzyLevelSet({len(self._levels)} levels over {self.coverage})"

    def fingerprint(self) -> str:
        """Stable hash of the full level geometry, recorded with trained weights."""
        text = ";".join(
            f"{l.index}:{l.range_low!r}:{l.range_high!r}:{l.anchor!r}:"
            f"{l.avg_ratio!r}:{l.clamp_min!r}:{l.clamp_max!r}"
            for l in self._levels
        )
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def with_ratios(self, ratios: Sequence[float]) -> "FuzzyLevelSet":
        """A copy whose avg_ratio values are replaced (clamp bounds kept)."""
        if len(ratios) != len(self._levels):
            raise ConfigurationError(
                f"expected {len(self._levels)} ratios, got {len(ratios)}"
            )
        return FuzzyLevelSet(
            FuzzyLevel(
                l.index, l.range_low, l.range_high, l.anchor,
                float(r), l.clamp_min, l.clamp_max,
            )
            for l, r in zip(self._levels, ratios)
        )

    def input_membership_functions(self) -> tuple[MembershipFunction, ...]:
        """The Ruspini partition of input sets over the anchors."""
        a = self.anchors
        if len(a) == 1:
            return (MembershipFunction("shoulder", a[0], a[0], a[0]),)
        mfs = [MembershipFunction("shoulder", a[0], a[0], a[1])]
        for i in range(1, len(a) - 1):
            mfs.append(MembershipFunction("triangle", a[i - 1], a[i], a[i + 1]))
        mfs.append(MembershipFunction("shoulder", a[-2], a[-1], a[-1]))
        return tuple(mfs)


def build_fuzzy_levels(
    table: ProgrammingTable,
    boundaries: Sequence[float],
    avg_ratios: Sequence[float] | None = None,
) -> FuzzyLevelSet:
    """Group a programming table's language levels into fuzzy levels.

    `boundaries` are strictly increasing range edges; each consecutive pair
    becomes one fuzzy level covering (low, high] with its anchor at the top
    of the range. Per level:

    * avg_ratio is the configured value from `avg_ratios` when given,
      otherwise the arithmetic mean of the `mean` SLOC/FP of the table
      entries whose language level falls in the range;
    * clamp bounds are the min `low` / max `high` of those entries, falling
      back to [0.5, 1.5] x avg_ratio when the range contains no entry.

    Ratios must be non-increasing with the level index (ratio falls as the
    language level rises).
    """
    if len(boundaries) < 2:
        raise ConfigurationError("need at least 2 boundaries to form a fuzzy level")
    edges = [float(b) for b in boundaries]
    for a, b in zip(edges, edges[1:]):
        if not a < b:
            raise ConfigurationError(
                f"boundaries must be strictly increasing, got {a} before {b}"
            )
    n = len(edges) - 1
    if avg_ratios is not None and len(avg_ratios) != n:
        raise ConfigurationError(f"expected {n} average ratios, got {len(avg_ratios)}")

    levels = []
    for i in range(n):
        low, high = edges[i], edges[i + 1]
        inside = [e for e in table if low < e.level <= high]
        if avg_ratios is not None:
            avg = float(avg_ratios[i])
        elif inside:
            avg = fmean(e.mean for e in inside)
        else:
            raise ConfigurationError(
                f"range ({low}, {high}] contains no table entry and no "
                "configured average ratio"
            )
        if inside:
            clamp_min = min(e.low for e in inside)
            clamp_max = max(e.high for e in inside)
        else:
            clamp_min, clamp_max = 0.5 * avg, 1.5 * avg
        levels.append(FuzzyLevel(i + 1, low, high, high, avg, clamp_min, clamp_max))

    _check_non_increasing(levels)
    return FuzzyLevelSet(levels)


def _check_non_increasing(levels: Sequence[FuzzyLevel]) -> None:
    for a, b in zip(levels, levels[1:]):
        if b.avg_ratio > a.avg_ratio:
            raise ConfigurationError(
                f"average ratios must be non-increasing with level, but level "
                f"{b.index} ({b.avg_ratio}) exceeds level {a.index} ({a.avg_ratio})"
            )


def default_fuzzy_levels(table: ProgrammingTable | None = None) -> FuzzyLevelSet:
    """The built-in 19-level configuration with its average SLOC/FP values.

    Clamp bounds derive from the given programming table (built-in default
    when omitted).
    """
    if table is None:
        table = DEFAULT_PROGRAMMING_TABLE
    return build_fuzzy_levels(table, _DEFAULT_BOUNDARIES, _DEFAULT_AVG_RATIOS)


def assign_fuzzy_level(levels: FuzzyLevelSet, language_level: float) -> int:
    """The 1-based index of the level whose range contains `language_level`.

    This crisp assignment defines the one-hot selector used for training:
    index i means a vector with a single 1 in position i.
    """
    low, high = levels.coverage
    if not low < language_level <= high:
        raise OutOfRangeError(language_level, low, high)
    for level in levels:
        if level.contains(language_level):
            return level.index
    raise OutOfRangeError(language_level, low, high)  # unreachable on valid sets


def one_hot(levels: FuzzyLevelSet, language_level: float) -> tuple[int, ...]:
    """The binary selector vector with a single 1 at the assigned level."""
    idx = assign_fuzzy_level(levels, language_level)
    return tuple(1 if i == idx else 0 for i in range(1, len(levels) + 1))


def fuzzify(levels: FuzzyLevelSet, language_level: float) -> tuple[float, ...]:
    """Graded memberships of a language level in every fuzzy level.

    The input sets form a partition of unity: values sum to 1 with at most
    two nonzero entries; outside the outermost anchors the shoulders hold
    membership 1.
    """
    low, high = levels.coverage
    if not low < language_level <= high:
        raise OutOfRangeError(language_level, low, high)
    anchors = levels.anchors
    n = len(anchors)
    memberships = [0.0] * n
    if language_level <= anchors[0]:
        memberships[0] = 1.0
    elif language_level >= anchors[-1]:
        memberships[-1] = 1.0
    else:
        for i in range(n - 1):
            if anchors[i] < language_level <= anchors[i + 1]:
                t = (language_level - anchors[i]) / (anchors[i + 1] - anchors[i])
                memberships[i] = 1.0 - t
                memberships[i + 1] = t
                break
    return tuple(memberships)


def output_half_widths(peaks: Sequence[float]) -> tuple[float, ...]:
    """Half-widths of the symmetric output triangles for a peak vector."""
    n = len(peaks)
    widths = []
    for i, p in enumerate(peaks):
        gaps = []
        if i > 0:
            gaps.append(abs(p - peaks[i - 1]))
        if i < n - 1:
            gaps.append(abs(p - peaks[i + 1]))
        base = min(gaps) if gaps else 0.25 * p
        widths.append(max(base, MIN_OUTPUT_HALF_WIDTH))
    return tuple(widths)


def output_membership_functions(
    levels: FuzzyLevelSet, peaks: Sequence[float] | None = None
) -> tuple[MembershipFunction, ...]:
    """The symmetric triangular output sets for a peak vector (default: avg ratios)."""
    if peaks is None:
        peaks = levels.avg_ratios
    _check_peaks(levels, peaks)
    widths = output_half_widths(peaks)
    return tuple(
        MembershipFunction("triangle", p - w, p, p + w) for p, w in zip(peaks, widths)
    )


def _check_peaks(levels: FuzzyLevelSet, peaks: Sequence[float]) -> None:
    if len(peaks) != len(levels):
        raise ConfigurationError(f"expected {len(levels)} output peaks, got {len(peaks)}")
    for level, peak in zip(levels, peaks):
        if not level.clamp_min <= peak <= level.clamp_max:
            raise ConfigurationError(
                f"level {level.index}: output peak {peak} outside clamp bounds "
                f"[{level.clamp_min}, {level.clamp_max}]"
            )


def infer_ratio(
    levels: FuzzyLevelSet,
    output_peaks: Sequence[float],
    language_level: float,
) -> float:
    """Crisp conversion ratio for a language level, by fuzzy inference.

    Rule i fires output set i with activation min(membership_i, 1), the
    activation truncates the output triangle, truncated sets are aggregated
    by pointwise max, and the aggregate's center of gravity over the
    discretized output universe is returned. At a level's anchor this equals
    that level's peak to within the grid's discretization error.
    """
    _check_peaks(levels, output_peaks)
    memberships = fuzzify(levels, language_level)
    peaks = [float(p) for p in output_peaks]
    widths = output_half_widths(peaks)

    lo = min(p - w for p, w in zip(peaks, widths))
    hi = max(p + w for p, w in zip(peaks, widths))
    ys = np.linspace(lo, hi, GRID_POINTS)

    aggregate = np.zeros_like(ys)
    for peak, width, membership in zip(peaks, widths, memberships):
        activation = min(membership, 1.0)
        if activation <= 0.0:
            continue
        triangle = np.maximum(0.0, 1.0 - np.abs(ys - peak) / width)
        np.maximum(aggregate, np.minimum(triangle, activation), out=aggregate)

    total = float(aggregate.sum())
    if total <= 0.0:  # cannot happen in-range unless the universe is absurdly coarse
        raise ConfigurationError(
            "aggregated output membership vanished on the defuzzification grid"
        )
    return float((ys * aggregate).sum() / total)


def load_fuzzy_levels(
    source: str | Path | None = None,
    table: ProgrammingTable | None = None,
) -> FuzzyLevelSet:
    """Load a fuzzy-level configuration CSV, or return the built-in default.

    Format: ``index,range_low,range_high,avg_ratio[,clamp_min,clamp_max]``.
    When the clamp columns are empty they are derived from `table` (built-in
    default when omitted) by the same rule as :func:`build_fuzzy_levels`.
    """
    if source is None:
        return default_fuzzy_levels(table)
    if table is None:
        table = DEFAULT_PROGRAMMING_TABLE
    path = Path(source)
    with path.open(newline="", encoding="utf-8") as fh:
        return parse_fuzzy_levels(fh, table)


def parse_fuzzy_levels(lines: Iterable[str], table: ProgrammingTable) -> FuzzyLevelSet:
    """Parse fuzzy-level configuration CSV from an iterable of text lines."""
    reader = csv.reader(lines)
    rows = list(reader)
    if not rows:
        raise ParseError("empty fuzzy-level file")
    header = [c.strip() for c in rows[0]]
    if header not in (LEVELS_HEADER, LEVELS_HEADER[:4]):
        raise ParseError(
            f"expected header {','.join(LEVELS_HEADER)!r} (clamp columns optional)", line=1
        )

    levels: list[FuzzyLevel] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) not in (4, 6):
            raise ParseError(f"expected 4 or 6 fields, got {len(row)}", lineno)
        try:
            index = int(row[0])
            low, high, avg = (float(v) for v in row[1:4])
            if len(row) == 6 and row[4].strip() and row[5].strip():
                clamp_min, clamp_max = float(row[4]), float(row[5])
            else:
                inside = [e for e in table if low < e.level <= high]
                if inside:
                    clamp_min = min(e.low for e in inside)
                    clamp_max = max(e.high for e in inside)
                else:
                    clamp_min, clamp_max = 0.5 * avg, 1.5 * avg
            levels.append(FuzzyLevel(index, low, high, high, avg, clamp_min, clamp_max))
        except (ValueError, ConfigurationError) as exc:
            raise ParseError(str(exc), lineno) from None
    if not levels:
        raise ParseError("fuzzy-level file contains no data rows")
    try:
        _check_non_increasing(levels)
        return FuzzyLevelSet(levels)
    except ConfigurationError as exc:
        raise ParseError(str(exc)) from None
