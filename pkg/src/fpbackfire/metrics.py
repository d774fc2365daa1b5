"""Estimation-error criteria and baseline-vs-calibrated improvement rows.

MRE divides the absolute error by the actual value and so favors
underestimation; MER divides by the estimate and favors overestimation.
PRED(q) counts the fraction of predictions whose MRE is strictly below the
threshold q. A report aggregates all four over one set of (actual,
predicted) pairs, and improvements are differences between two reports in
percentage points.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isfinite
from typing import Iterable

from .errors import EmptyDatasetError, IncompatibleReportError, UndefinedMetricError


@dataclass(frozen=True)
class EvaluationReport:
    """MMRE/MMER and PRED fractions over `n` (actual, predicted) pairs."""

    mmre: float
    mmer: float
    pred25: float
    pred50: float
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise EmptyDatasetError("an evaluation report needs at least one sample")
        for name in ("mmre", "mmer", "pred25", "pred50"):
            if not isfinite(getattr(self, name)):
                raise UndefinedMetricError(f"{name} must be finite")
        if self.pred25 > self.pred50:
            raise UndefinedMetricError(
                f"pred25 ({self.pred25}) cannot exceed pred50 ({self.pred50})"
            )


@dataclass(frozen=True)
class Improvement:
    """Baseline-minus-calibrated error deltas, in percentage points."""

    mmre_points: float
    mmer_points: float
    pred25_points: float
    pred50_points: float


@dataclass(frozen=True)
class ImprovementRow:
    """One experiment's report row: split sizes plus improvement columns."""

    experiment_id: int
    training_samples: int
    test_samples: int
    mmre_improvement: float
    mmer_improvement: float
    pred25_improvement: float
    pred50_improvement: float

    def __post_init__(self):
        if self.training_samples < 0 or self.test_samples < 0:
            raise ValueError("sample counts must be >= 0")


def mre(actual: float, predicted: float) -> float:
    """Magnitude of relative error: |actual - predicted| / actual."""
    if actual <= 0:
        raise UndefinedMetricError(f"mre needs actual > 0, got {actual}")
    return abs(actual - predicted) / actual


def mer(actual: float, predicted: float) -> float:
    """Magnitude of error relative to the estimate: |actual - predicted| / predicted."""
    if predicted <= 0:
        raise UndefinedMetricError(f"mer needs predicted > 0, got {predicted}")
    return abs(actual - predicted) / predicted


def evaluate(pairs: Iterable[tuple[float, float]]) -> EvaluationReport:
    """Aggregate MMRE, MMER, PRED(25%), and PRED(50%) over (actual, predicted) pairs.

    PRED thresholds are strict: a pair counts toward PRED(q) when its MRE is
    strictly below q.
    """
    pairs = list(pairs)
    if not pairs:
        raise EmptyDatasetError("cannot evaluate an empty sample")
    mres = [mre(a, p) for a, p in pairs]
    mers = [mer(a, p) for a, p in pairs]
    n = len(pairs)
    return EvaluationReport(
        mmre=sum(mres) / n,
        mmer=sum(mers) / n,
        pred25=sum(1 for v in mres if v < 0.25) / n,
        pred50=sum(1 for v in mres if v < 0.50) / n,
        n=n,
    )


def improvement(baseline: EvaluationReport, calibrated: EvaluationReport) -> Improvement:
    """Improvement of `calibrated` over `baseline`, in percentage points.

    Positive means the calibrated model is better: error metrics improve by
    falling (baseline - calibrated), PRED improves by rising (calibrated -
    baseline). Both reports must cover the same number of test pairs.
    """
    if baseline.n != calibrated.n:
        raise IncompatibleReportError(
            f"reports cover different sample counts: {baseline.n} vs {calibrated.n}"
        )
    return Improvement(
        mmre_points=100.0 * (baseline.mmre - calibrated.mmre),
        mmer_points=100.0 * (baseline.mmer - calibrated.mmer),
        pred25_points=100.0 * (calibrated.pred25 - baseline.pred25),
        pred50_points=100.0 * (calibrated.pred50 - baseline.pred50),
    )
