"""The seven train/evaluate experiment protocols and their dataset splits.

Experiments 1 and 2 train on a random half of the dataset (stratified by
fuzzy level), 3 and 4 split each level at its median project size (3 trains
on the large half, 4 on the small half), 5 and 6 train on a random 75%, and
7 trains and evaluates on the full dataset. Each experiment calibrates
weights on its training split, then scores both the uncalibrated ratios and
the calibrated ones on the test split, producing one improvement row.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .calibration import CalibratedWeights, TrainingConfig, train
from .conversion import ProgrammingTable, ProjectRecord
from .errors import (
    ConfigurationError,
    EmptyDatasetError,
    UnknownExperimentError,
    UnknownLanguageError,
)
from .fuzzy import FuzzyLevelSet, assign_fuzzy_level, infer_ratio
from .metrics import EvaluationReport, ImprovementRow, evaluate, improvement

#: Split seeds for the randomized experiments, recorded in report headers.
DEFAULT_EXPERIMENT_SEEDS = {1: 1, 2: 2, 5: 5, 6: 6}

EXPERIMENT_IDS = range(1, 8)


@dataclass(frozen=True)
class SplitSpec:
    """How a dataset was divided into train and test partitions."""

    kind: str  # "random-stratified" | "size-based" | "full"
    train_fraction: float | None = None
    train_side: str | None = None  # "large" | "small"
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("random-stratified", "size-based", "full"):
            raise ConfigurationError(f"unknown split kind: {self.kind!r}")
        if self.kind == "random-stratified":
            if self.train_fraction is None or not 0 < self.train_fraction <= 1:
                raise ConfigurationError(
                    f"train_fraction must be in (0, 1], got {self.train_fraction}"
                )
        if self.kind == "size-based" and self.train_side not in ("large", "small"):
            raise ConfigurationError(f"train_side must be large or small, got {self.train_side}")


@dataclass(frozen=True)
class LeveledRecord:
    """A project record resolved onto a fuzzy level.

    Keeps the raw language level (inference input) alongside the crisp level
    index (training selector).
    """

    id: str
    language_level: float
    level_index: int
    ufp: float
    sloc: float


@dataclass(frozen=True)
class ExperimentResult:
    experiment_id: int
    split: SplitSpec
    weights: CalibratedWeights
    baseline_report: EvaluationReport
    calibrated_report: EvaluationReport
    improvement: ImprovementRow


def assign_levels(
    projects: Iterable[ProjectRecord],
    table: ProgrammingTable,
    levels: FuzzyLevelSet,
) -> list[LeveledRecord]:
    """Resolve each record's language onto a fuzzy level.

    The language field is looked up in the programming table
    (case-insensitively); a field that instead parses as a number is taken
    as a raw language level, which is how synthetic datasets name levels
    that no table language occupies.
    """
    out = []
    for record in projects:
        try:
            language_level = table.find(record.language).level
        except UnknownLanguageError:
            try:
                language_level = float(record.language)
            except ValueError:
                raise UnknownLanguageError(record.language) from None
        index = assign_fuzzy_level(levels, language_level)
        out.append(LeveledRecord(record.id, language_level, index, record.ufp, record.sloc))
    return out


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _by_level(dataset: Sequence[LeveledRecord]) -> dict[int, list[LeveledRecord]]:
    groups: dict[int, list[LeveledRecord]] = {}
    for record in dataset:
        groups.setdefault(record.level_index, []).append(record)
    return groups


def split_random_stratified(
    dataset: Sequence[LeveledRecord], fraction: float, seed: int
) -> tuple[list[LeveledRecord], list[LeveledRecord]]:
    """Seeded random split, stratified by fuzzy level.

    Within each level, round-half-up(fraction * count) records go to the
    training partition; train and test are disjoint and cover the dataset.
    """
    if not dataset:
        raise EmptyDatasetError("cannot split an empty dataset")
    if not 0 < fraction < 1:
        raise ConfigurationError(f"split fraction must be in (0, 1), got {fraction}")
    rng = random.Random(seed)
    train_part: list[LeveledRecord] = []
    test_part: list[LeveledRecord] = []
    groups = _by_level(dataset)
    for index in sorted(groups):
        rows = list(groups[index])
        rng.shuffle(rows)
        k = _round_half_up(fraction * len(rows))
        train_part.extend(rows[:k])
        test_part.extend(rows[k:])
    return train_part, test_part


def split_by_size(
    dataset: Sequence[LeveledRecord], train_side: str
) -> tuple[list[LeveledRecord], list[LeveledRecord]]:
    """Median split by project size (UFP) within each fuzzy level.

    The training partition takes round-half-up(count / 2) records from the
    chosen side: the largest projects for ``train_side="large"``, the
    smallest for ``"small"``. UFP ties break by record id so the split is
    deterministic.
    """
    if not dataset:
        raise EmptyDatasetError("cannot split an empty dataset")
    if train_side not in ("large", "small"):
        raise ConfigurationError(f"train_side must be large or small, got {train_side!r}")
    train_part: list[LeveledRecord] = []
    test_part: list[LeveledRecord] = []
    groups = _by_level(dataset)
    for index in sorted(groups):
        rows = sorted(groups[index], key=lambda r: (r.ufp, r.id))
        k = _round_half_up(len(rows) / 2)
        if train_side == "large":
            train_part.extend(rows[len(rows) - k:])
            test_part.extend(rows[: len(rows) - k])
        else:
            train_part.extend(rows[:k])
            test_part.extend(rows[k:])
    return train_part, test_part


def split_spec_for(experiment_id: int, split_seed: int | None = None) -> SplitSpec:
    """The split protocol for an experiment id (1..7)."""
    if experiment_id not in EXPERIMENT_IDS:
        raise UnknownExperimentError(f"experiment id must be in 1..7, got {experiment_id}")
    if experiment_id in (1, 2, 5, 6):
        seed = DEFAULT_EXPERIMENT_SEEDS[experiment_id] if split_seed is None else split_seed
        fraction = 0.5 if experiment_id in (1, 2) else 0.75
        return SplitSpec("random-stratified", train_fraction=fraction, seed=seed)
    if experiment_id == 3:
        return SplitSpec("size-based", train_side="large")
    if experiment_id == 4:
        return SplitSpec("size-based", train_side="small")
    return SplitSpec("full")


def _split(
    dataset: Sequence[LeveledRecord], spec: SplitSpec
) -> tuple[list[LeveledRecord], list[LeveledRecord]]:
    if spec.kind == "random-stratified":
        return split_random_stratified(dataset, spec.train_fraction, spec.seed)
    if spec.kind == "size-based":
        return split_by_size(dataset, spec.train_side)
    return list(dataset), list(dataset)


def _predictions(
    records: Sequence[LeveledRecord], levels: FuzzyLevelSet, peaks: Sequence[float]
) -> list[tuple[float, float]]:
    # Records share few distinct language levels, so infer each ratio once.
    ratios = {
        lvl: infer_ratio(levels, peaks, lvl)
        for lvl in sorted({r.language_level for r in records})
    }
    return [(r.sloc, r.ufp * ratios[r.language_level]) for r in records]


def run_experiment(
    experiment_id: int,
    dataset: Sequence[LeveledRecord],
    levels: FuzzyLevelSet,
    training_config: TrainingConfig | None = None,
    split_seed: int | None = None,
) -> ExperimentResult:
    """Run one experiment protocol and report both models on its test split.

    The baseline predicts through inference over the levels' configured
    ratios; the calibrated model differs only in using the weights trained
    on this experiment's training split.
    """
    if experiment_id not in EXPERIMENT_IDS:
        raise UnknownExperimentError(f"experiment id must be in 1..7, got {experiment_id}")
    if not dataset:
        raise EmptyDatasetError("cannot run an experiment on an empty dataset")
    spec = split_spec_for(experiment_id, split_seed)
    train_part, test_part = _split(dataset, spec)

    weights = train(
        [(r.level_index, r.ufp, r.sloc) for r in train_part], levels, training_config
    )
    baseline_report = evaluate(_predictions(test_part, levels, levels.avg_ratios))
    calibrated_report = evaluate(_predictions(test_part, levels, weights.weights))
    delta = improvement(baseline_report, calibrated_report)
    row = ImprovementRow(
        experiment_id=experiment_id,
        training_samples=len(train_part),
        test_samples=len(test_part),
        mmre_improvement=delta.mmre_points,
        mmer_improvement=delta.mmer_points,
        pred25_improvement=delta.pred25_points,
        pred50_improvement=delta.pred50_points,
    )
    return ExperimentResult(experiment_id, spec, weights, baseline_report, calibrated_report, row)


def run_all(
    dataset: Sequence[LeveledRecord],
    levels: FuzzyLevelSet,
    training_config: TrainingConfig | None = None,
) -> list[ExperimentResult]:
    """Run experiments 1..7 in order with the default split seeds."""
    return [run_experiment(i, dataset, levels, training_config) for i in EXPERIMENT_IDS]
