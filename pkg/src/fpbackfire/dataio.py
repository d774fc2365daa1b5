"""CSV ingestion and emission, plus the synthetic dataset generator.

All files are UTF-8 CSV with '.' decimals. Floats are written with repr so
every read-after-write round-trips exactly; parse failures carry the 1-based
line number of the offending row. Lines starting with '#' are comment
headers: writers use them to record provenance (training config, split
seeds, level-set fingerprints) and readers skip or re-parse them.
"""

from __future__ import annotations

import csv
import random
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .calibration import CalibratedWeights, TrainingConfig
from .conversion import ProgrammingTable, ProjectRecord, TABLE_HEADER
from .errors import ConfigurationError, ParseError
from .fuzzy import LEVELS_HEADER, FuzzyLevelSet
from .metrics import ImprovementRow

DATASET_HEADER = ["id", "language", "ufp", "sloc"]
WEIGHTS_HEADER = ["index", "weight", "clamp_min", "clamp_max"]
REPORT_HEADER = [
    "experiment", "training_samples", "test_samples",
    "mmre_improvement", "mmer_improvement", "pred25_improvement", "pred50_improvement",
]
CURVE_HEADER = ["language_level", "sloc_per_fp"]


@dataclass(frozen=True)
class CurvePoint:
    """One point of a conversion-ratio-versus-language-level curve."""

    language_level: float
    ratio: float

    def __post_init__(self):
        if self.ratio <= 0:
            raise ConfigurationError(f"curve ratio must be > 0, got {self.ratio}")


@contextmanager
def open_for_write(target):
    """Yield a text stream for a path, Path, or already-open file object."""
    if hasattr(target, "write"):
        yield target
    else:
        with Path(target).open("w", newline="", encoding="utf-8") as fh:
            yield fh


def _read_lines(source) -> list[str]:
    if hasattr(source, "read"):
        return source.read().splitlines()
    return Path(source).read_text(encoding="utf-8").splitlines()


def _float_field(value: str, name: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise ParseError(f"{name} is not a number: {value!r}", line) from None


# -- project datasets --------------------------------------------------------

def read_projects_csv(source) -> list[ProjectRecord]:
    """Read project records from ``id,language,ufp,sloc`` CSV.

    Structural problems (bad header, malformed numbers, non-positive sizes,
    duplicate ids) raise :class:`ParseError` with the line number; whether a
    language is known is deliberately not checked here, so callers see all
    structural errors before any mapping errors.
    """
    lines = _read_lines(source)
    rows = list(csv.reader(lines))
    if not rows:
        raise ParseError("empty dataset file")
    if [c.strip() for c in rows[0]] != DATASET_HEADER:
        raise ParseError(f"expected header {','.join(DATASET_HEADER)!r}", line=1)
    records: list[ProjectRecord] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
        record_id = row[0].strip()
        if not record_id:
            raise ParseError("record id must be non-empty", lineno)
        if record_id in seen:
            raise ParseError(f"duplicate record id: {record_id!r}", lineno)
        seen.add(record_id)
        ufp = _float_field(row[2], "ufp", lineno)
        sloc = _float_field(row[3], "sloc", lineno)
        if ufp <= 0:
            raise ParseError(f"ufp must be > 0, got {ufp}", lineno)
        if sloc <= 0:
            raise ParseError(f"sloc must be > 0, got {sloc}", lineno)
        records.append(ProjectRecord(record_id, row[1].strip(), ufp, sloc))
    if not records:
        raise ParseError("dataset contains no data rows")
    return records


def write_projects_csv(target, records: Iterable[ProjectRecord]) -> None:
    with open_for_write(target) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(DATASET_HEADER)
        for r in records:
            writer.writerow([r.id, r.language, repr(r.ufp), repr(r.sloc)])


def generate_synthetic_dataset(
    levels: FuzzyLevelSet,
    per_level_count: int | Mapping[int, int],
    noise_fraction: float = 0.0,
    true_ratios: Mapping[int, float] | Sequence[float] | None = None,
    seed: int = 0,
    ufp_range: tuple[float, float] = (10.0, 2000.0),
) -> list[ProjectRecord]:
    """Generate project records with a known conversion ratio per level.

    Per level, `per_level_count` records (an int, or a mapping from level
    index to count; levels absent from the mapping get none) draw UFP
    uniformly from `ufp_range` and set ``sloc = ufp * ratio * (1 + u)`` with
    u uniform in +-`noise_fraction`.
    The ratio is the level's configured average unless overridden through
    `true_ratios` (mapping from level index, or one value per level);
    overrides must stay inside the level's clamp bounds. Records name their
    language by the level's anchor, which :func:`experiments.assign_levels`
    resolves numerically. Deterministic for a fixed seed.
    """
    if noise_fraction < 0:
        raise ConfigurationError(f"noise_fraction must be >= 0, got {noise_fraction}")
    if not 0 < ufp_range[0] <= ufp_range[1]:
        raise ConfigurationError(f"invalid ufp_range: {ufp_range}")

    overrides: dict[int, float] = {}
    if true_ratios is not None:
        if isinstance(true_ratios, Mapping):
            overrides = {int(k): float(v) for k, v in true_ratios.items()}
        else:
            if len(true_ratios) != len(levels):
                raise ConfigurationError(
                    f"expected {len(levels)} true ratios, got {len(true_ratios)}"
                )
            overrides = {i + 1: float(v) for i, v in enumerate(true_ratios)}
    for index, ratio in overrides.items():
        if not 1 <= index <= len(levels):
            raise ConfigurationError(f"true-ratio override for unknown level {index}")
        level = levels[index - 1]
        if not level.clamp_min <= ratio <= level.clamp_max:
            raise ConfigurationError(
                f"true ratio {ratio} for level {index} outside clamp bounds "
                f"[{level.clamp_min}, {level.clamp_max}]"
            )

    counts: dict[int, int] = {}
    for level in levels:
        if isinstance(per_level_count, Mapping):
            count = per_level_count.get(level.index, 0)
        else:
            count = per_level_count
        if count < 0:
            raise ConfigurationError(f"per-level count must be >= 0, got {count}")
        counts[level.index] = count

    rng = random.Random(seed)
    records: list[ProjectRecord] = []
    for level in levels:
        ratio = overrides.get(level.index, level.avg_ratio)
        for k in range(counts[level.index]):
            ufp = rng.uniform(*ufp_range)
            noise = rng.uniform(-noise_fraction, noise_fraction) if noise_fraction else 0.0
            sloc = ufp * ratio * (1.0 + noise)
            records.append(
                ProjectRecord(
                    id=f"syn-{level.index:02d}-{k:04d}",
                    language=repr(level.anchor),
                    ufp=ufp,
                    sloc=sloc,
                )
            )
    return records


# -- calibrated weights ------------------------------------------------------

def write_weights_csv(target, weights: CalibratedWeights, levels: FuzzyLevelSet) -> None:
    """Write calibrated weights with a comment header recording provenance."""
    if weights.levels_fingerprint != levels.fingerprint():
        raise ConfigurationError(
            "weights do not belong to the given level set; refusing to write"
        )
    cfg = weights.config
    with open_for_write(target) as fh:
        fh.write(f"# levels_fingerprint: {weights.levels_fingerprint}\n")
        fh.write(f"# learning_rate: {cfg.learning_rate!r}\n")
        fh.write(f"# max_epochs: {cfg.max_epochs}\n")
        fh.write(f"# error_goal: {cfg.error_goal!r}\n")
        fh.write(f"# rng_seed: {cfg.rng_seed}\n")
        fh.write(f"# shuffle_each_epoch: {cfg.shuffle_each_epoch}\n")
        fh.write(f"# scale_update_by_ufp: {cfg.scale_update_by_ufp}\n")
        fh.write(f"# epochs_run: {weights.epochs_run}\n")
        fh.write(f"# final_epoch_error: {weights.final_epoch_error!r}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(WEIGHTS_HEADER)
        for level, weight in zip(levels, weights.weights):
            writer.writerow([level.index, repr(weight), repr(level.clamp_min), repr(level.clamp_max)])


def read_weights_csv(source) -> CalibratedWeights:
    """Read calibrated weights, reconstructing config and provenance."""
    lines = _read_lines(source)
    meta: dict[str, str] = {}
    body: list[str] = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition(":")
            meta[key.strip()] = value.strip()
        else:
            body.append(line)
    rows = list(csv.reader(body))
    if not rows or [c.strip() for c in rows[0]] != WEIGHTS_HEADER:
        raise ParseError(f"expected header {','.join(WEIGHTS_HEADER)!r}")
    values: list[float] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", lineno)
        index = int(_float_field(row[0], "index", lineno))
        if index != len(values) + 1:
            raise ParseError(f"expected index {len(values) + 1}, got {index}", lineno)
        values.append(_float_field(row[1], "weight", lineno))
    if not values:
        raise ParseError("weights file contains no data rows")
    try:
        config = TrainingConfig(
            learning_rate=float(meta["learning_rate"]),
            max_epochs=int(meta["max_epochs"]),
            error_goal=float(meta["error_goal"]),
            rng_seed=int(meta["rng_seed"]),
            shuffle_each_epoch=meta["shuffle_each_epoch"] == "True",
            scale_update_by_ufp=meta["scale_update_by_ufp"] == "True",
        )
        return CalibratedWeights(
            weights=tuple(values),
            epochs_run=int(meta["epochs_run"]),
            final_epoch_error=float(meta["final_epoch_error"]),
            config=config,
            levels_fingerprint=meta["levels_fingerprint"],
        )
    except KeyError as exc:
        raise ParseError(f"weights file is missing the {exc.args[0]!r} header comment") from None
    except ValueError as exc:
        raise ParseError(f"malformed weights header comment: {exc}") from None


# -- tables and level configurations -----------------------------------------

def write_programming_table_csv(target, table: ProgrammingTable) -> None:
    with open_for_write(target) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TABLE_HEADER)
        for e in table:
            writer.writerow([e.name, repr(e.level), repr(e.low), repr(e.mean), repr(e.high)])


def write_fuzzy_levels_csv(target, levels: FuzzyLevelSet) -> None:
    with open_for_write(target) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(LEVELS_HEADER)
        for l in levels:
            writer.writerow([
                l.index, repr(l.range_low), repr(l.range_high),
                repr(l.avg_ratio), repr(l.clamp_min), repr(l.clamp_max),
            ])


# -- experiment reports ------------------------------------------------------

def write_report_csv(
    target,
    rows: Sequence[ImprovementRow],
    split_seeds: Mapping[int, int] | None = None,
    training_config: TrainingConfig | None = None,
) -> None:
    """Write improvement rows in the report format, one line per experiment.

    The comment header records the split seeds and training configuration so
    any report can be regenerated byte for byte.
    """
    with open_for_write(target) as fh:
        if split_seeds:
            seeds = " ".join(f"{k}={split_seeds[k]}" for k in sorted(split_seeds))
            fh.write(f"# split_seeds: {seeds}\n")
        if training_config is not None:
            cfg = training_config
            fh.write(
                "# training: "
                f"learning_rate={cfg.learning_rate!r} max_epochs={cfg.max_epochs} "
                f"error_goal={cfg.error_goal!r} rng_seed={cfg.rng_seed} "
                f"shuffle_each_epoch={cfg.shuffle_each_epoch} "
                f"scale_update_by_ufp={cfg.scale_update_by_ufp}\n"
            )
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in rows:
            writer.writerow([
                row.experiment_id, row.training_samples, row.test_samples,
                repr(row.mmre_improvement), repr(row.mmer_improvement),
                repr(row.pred25_improvement), repr(row.pred50_improvement),
            ])


def read_report_csv(source) -> list[ImprovementRow]:
    lines = [l for l in _read_lines(source) if not l.startswith("#")]
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != REPORT_HEADER:
        raise ParseError(f"expected header {','.join(REPORT_HEADER)!r}")
    out: list[ImprovementRow] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 7:
            raise ParseError(f"expected 7 fields, got {len(row)}", lineno)
        out.append(ImprovementRow(
            experiment_id=int(row[0]),
            training_samples=int(row[1]),
            test_samples=int(row[2]),
            mmre_improvement=_float_field(row[3], "mmre_improvement", lineno),
            mmer_improvement=_float_field(row[4], "mmer_improvement", lineno),
            pred25_improvement=_float_field(row[5], "pred25_improvement", lineno),
            pred50_improvement=_float_field(row[6], "pred50_improvement", lineno),
        ))
    return out


# -- conversion-ratio curves -------------------------------------------------

def emit_curve(levels: FuzzyLevelSet, peaks: Sequence[float] | None = None) -> list[CurvePoint]:
    """Conversion-ratio-versus-language-level curve points, one per level.

    Each point pairs a level's anchor with its output peak (the configured
    average by default, or calibrated weights when given), ascending by
    anchor.
    """
    if peaks is None:
        peaks = levels.avg_ratios
    if len(peaks) != len(levels):
        raise ConfigurationError(f"expected {len(levels)} peaks, got {len(peaks)}")
    return [CurvePoint(l.anchor, float(p)) for l, p in zip(levels, peaks)]


def write_curve_csv(target, points: Sequence[CurvePoint]) -> None:
    with open_for_write(target) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CURVE_HEADER)
        for p in points:
            writer.writerow([repr(p.language_level), repr(p.ratio)])


def read_curve_csv(source) -> list[CurvePoint]:
    lines = _read_lines(source)
    rows = list(csv.reader(lines))
    if not rows or [c.strip() for c in rows[0]] != CURVE_HEADER:
        raise ParseError(f"expected header {','.join(CURVE_HEADER)!r}")
    points: list[CurvePoint] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", lineno)
        points.append(CurvePoint(
            _float_field(row[0], "language_level", lineno),
            _float_field(row[1], "sloc_per_fp", lineno),
        ))
    return points
