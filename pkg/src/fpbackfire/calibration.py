"""Constrained per-level calibration of conversion ratios.

A single weight per fuzzy level (the level's SLOC/FP) is trained online
against project records. Each record selects exactly one weight through its
level index; the prediction is ``ufp * weight``, the raw error
``actual - prediction`` is scaled by the learning rate and added to the
weight, and the result is clamped into the level's [clamp_min, clamp_max]
bounds so calibration can never leave the language's documented range.

Training is strictly sequential: updates are order-dependent, so the visiting
order is pinned by the config seed and must not be parallelized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    ConfigurationError,
    EmptyDatasetError,
    RecordValidationError,
    StaleWeightsError,
)
from .fuzzy import FuzzyLevelSet

#: One training record: (1-based fuzzy level index, ufp, actual sloc).
TrainingSample = tuple[int, float, float]


@dataclass(frozen=True)
class TrainingConfig:
    """Hyperparameters and determinism knobs for :func:`train`.

    `error_goal` stops training once the epoch-over-epoch improvement of the
    mean absolute relative error (mean of |actual - prediction| / actual over
    one epoch's visits) falls below it. `scale_update_by_ufp` switches the
    update step from the plain ``rate * error`` to the conventional
    input-scaled ``rate * error * ufp``; it is off by default and callers
    enabling it must shrink the learning rate accordingly.
    """

    learning_rate: float = 1e-4
    max_epochs: int = 1000
    error_goal: float = 1e-6
    rng_seed: int = 0
    shuffle_each_epoch: bool = True
    scale_update_by_ufp: bool = False

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ConfigurationError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.max_epochs < 1:
            raise ConfigurationError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.error_goal < 0:
            raise ConfigurationError(f"error_goal must be >= 0, got {self.error_goal}")


@dataclass(frozen=True)
class CalibratedWeights:
    """Per-level calibrated SLOC/FP plus the provenance needed to reuse them."""

    weights: tuple[float, ...]
    epochs_run: int
    final_epoch_error: float
    config: TrainingConfig
    levels_fingerprint: str

    def __len__(self) -> int:
        return len(self.weights)


def initial_weights(
    levels: FuzzyLevelSet, config: TrainingConfig | None = None
) -> CalibratedWeights:
    """Untrained weights: every level keeps its configured average ratio."""
    return CalibratedWeights(
        weights=levels.avg_ratios,
        epochs_run=0,
        final_epoch_error=float("nan"),
        config=config or TrainingConfig(),
        levels_fingerprint=levels.fingerprint(),
    )


def predict(weights: CalibratedWeights, level_index: int, ufp: float) -> float:
    """Predicted SLOC for a project: ufp times the selected level's weight."""
    if not 1 <= level_index <= len(weights.weights):
        raise IndexError(
            f"level index {level_index} outside 1..{len(weights.weights)}"
        )
    return ufp * weights.weights[level_index - 1]


def _validate_dataset(dataset: Sequence[TrainingSample], n_levels: int) -> None:
    for pos, (level_index, ufp, sloc) in enumerate(dataset):
        if not 1 <= level_index <= n_levels:
            raise RecordValidationError(
                str(pos), f"level index {level_index} outside 1..{n_levels}"
            )
        if ufp <= 0:
            raise RecordValidationError(str(pos), f"ufp must be > 0, got {ufp}")
        if sloc <= 0:
            raise RecordValidationError(str(pos), f"sloc must be > 0, got {sloc}")


def train(
    dataset: Sequence[TrainingSample],
    levels: FuzzyLevelSet,
    config: TrainingConfig | None = None,
) -> CalibratedWeights:
    """Calibrate one conversion weight per fuzzy level from project records.

    Weights start at each level's average ratio. Per record, in seeded
    shuffled order, the selected weight moves by ``learning_rate * error``
    (error = actual - prediction) and is clamped into the level's bounds.
    Training stops at `max_epochs` or as soon as an epoch improves the mean
    absolute relative error by less than `error_goal` over the previous one.
    Levels that no record selects keep their initial weight.

    Deterministic: a fixed dataset, config, and seed reproduce the result
    bit for bit. With `shuffle_each_epoch` off, records are visited in
    dataset order every epoch and the seed is unused.
    """
    config = config or TrainingConfig()
    records = list(dataset)
    if not records:
        raise EmptyDatasetError("training dataset is empty")
    _validate_dataset(records, len(levels))

    weights = [level.avg_ratio for level in levels.levels]
    clamp_lo = [level.clamp_min for level in levels.levels]
    clamp_hi = [level.clamp_max for level in levels.levels]
    rate = config.learning_rate

    order = list(range(len(records)))
    rng = random.Random(config.rng_seed)
    previous_error: float | None = None
    epoch_error = float("nan")
    epochs_run = 0

    for _ in range(config.max_epochs):
        if config.shuffle_each_epoch:
            rng.shuffle(order)
        total_relative = 0.0
        for j in order:
            level_index, ufp, sloc = records[j]
            i = level_index - 1
            error = sloc - ufp * weights[i]
            step = rate * error * ufp if config.scale_update_by_ufp else rate * error
            updated = weights[i] + step
            weights[i] = min(max(updated, clamp_lo[i]), clamp_hi[i])
            total_relative += abs(error) / sloc
        epoch_error = total_relative / len(records)
        epochs_run += 1
        if previous_error is not None and previous_error - epoch_error < config.error_goal:
            break
        previous_error = epoch_error

    return CalibratedWeights(
        weights=tuple(weights),
        epochs_run=epochs_run,
        final_epoch_error=epoch_error,
        config=config,
        levels_fingerprint=levels.fingerprint(),
    )


def calibrated_conversion_table(
    levels: FuzzyLevelSet, weights: CalibratedWeights
) -> FuzzyLevelSet:
    """The level set with its ratios replaced by the calibrated weights.

    Clamp bounds and geometry are preserved, so subsequent inference runs on
    the calibrated peaks. Refuses weights trained against a different level
    set.
    """
    if weights.levels_fingerprint != levels.fingerprint():
        raise StaleWeightsError(
            "calibrated weights were trained against a different fuzzy level set "
            f"(weights fingerprint {weights.levels_fingerprint}, "
            f"levels fingerprint {levels.fingerprint()})"
        )
    return levels.with_ratios(weights.weights)
