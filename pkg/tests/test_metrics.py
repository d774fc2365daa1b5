import random

import pytest

from fpbackfire import (
    EmptyDatasetError,
    EvaluationReport,
    IncompatibleReportError,
    UndefinedMetricError,
    evaluate,
    improvement,
    mer,
    mre,
)

from .oracles import brute_force_report


def random_pairs(rng, n):
    return [(rng.uniform(1, 1e5), rng.uniform(1, 1e5)) for _ in range(n)]


def test_mre_examples():
    assert mre(100, 75) == 0.25
    assert mre(42, 42) == 0
    with pytest.raises(UndefinedMetricError):
        mre(0, 10)
    with pytest.raises(UndefinedMetricError):
        mre(-5, 10)


def test_mer_examples():
    assert mer(75, 100) == 0.25
    assert mer(42, 42) == 0
    with pytest.raises(UndefinedMetricError):
        mer(10, 0)


def test_mre_mer_duality():
    rng = random.Random(3)
    for _ in range(10_000):
        actual = rng.uniform(1e-3, 1e6)
        predicted = rng.uniform(1e-3, 1e6)
        assert mre(actual, predicted) == mer(predicted, actual)


def test_evaluate_example_fractions():
    # mre values 0.1, 0.3, 0.2
    report = evaluate([(100, 90), (100, 70), (100, 80)])
    assert report.pred25 == pytest.approx(2 / 3)
    assert report.pred50 == 1.0
    assert report.mmre == pytest.approx(0.2)
    assert report.n == 3


def test_evaluate_exact_predictions():
    report = evaluate([(50, 50), (75, 75)])
    assert report.mmre == 0 and report.mmer == 0
    assert report.pred25 == 1.0 and report.pred50 == 1.0


def test_evaluate_strict_pred_thresholds():
    report = evaluate([(100, 75)])  # mre exactly 0.25
    assert report.mmre == 0.25
    assert report.pred25 == 0.0  # strictly-below comparison
    assert report.pred50 == 1.0


def test_evaluate_rejects_bad_input():
    with pytest.raises(EmptyDatasetError):
        evaluate([])
    with pytest.raises(UndefinedMetricError):
        evaluate([(100, 0)])
    with pytest.raises(UndefinedMetricError):
        evaluate([(0, 100)])


def test_evaluate_matches_brute_force_exactly():
    rng = random.Random(9)
    for _ in range(100):
        pairs = random_pairs(rng, rng.randint(1, 1000))
        report = evaluate(pairs)
        mmre, mmer, pred25, pred50 = brute_force_report(pairs)
        assert report.mmre == mmre
        assert report.mmer == mmer
        assert report.pred25 == pred25
        assert report.pred50 == pred50


def test_evaluate_scale_invariance():
    rng = random.Random(12)
    pairs = random_pairs(rng, 500)
    base = evaluate(pairs)
    for k in (0.001, 3.0, 1e4):
        scaled = evaluate([(a * k, p * k) for a, p in pairs])
        assert scaled.mmre == pytest.approx(base.mmre, rel=1e-12)
        assert scaled.mmer == pytest.approx(base.mmer, rel=1e-12)
        assert scaled.pred25 == base.pred25
        assert scaled.pred50 == base.pred50


def test_pred_monotone_in_threshold():
    rng = random.Random(5)
    for _ in range(50):
        report = evaluate(random_pairs(rng, rng.randint(1, 200)))
        assert report.pred25 <= report.pred50


def test_report_invariants():
    with pytest.raises(UndefinedMetricError):
        EvaluationReport(mmre=0.1, mmer=0.1, pred25=0.9, pred50=0.5, n=10)
    with pytest.raises(EmptyDatasetError):
        EvaluationReport(mmre=0.1, mmer=0.1, pred25=0.5, pred50=0.9, n=0)
    with pytest.raises(UndefinedMetricError):
        EvaluationReport(mmre=float("inf"), mmer=0.1, pred25=0.5, pred50=0.9, n=1)


def test_improvement_examples():
    baseline = EvaluationReport(mmre=0.90, mmer=0.5, pred25=0.30, pred50=0.50, n=120)
    calibrated = EvaluationReport(mmre=0.8571, mmer=0.45, pred25=0.2714, pred50=0.50, n=120)
    delta = improvement(baseline, calibrated)
    assert delta.mmre_points == pytest.approx(4.29, abs=1e-9)
    assert delta.mmer_points == pytest.approx(5.0)
    assert delta.pred25_points == pytest.approx(-2.86, abs=1e-9)  # negatives allowed
    assert delta.pred50_points == 0.0


def test_improvement_identity():
    report = EvaluationReport(mmre=0.3, mmer=0.4, pred25=0.2, pred50=0.6, n=50)
    delta = improvement(report, report)
    assert (delta.mmre_points, delta.mmer_points) == (0.0, 0.0)
    assert (delta.pred25_points, delta.pred50_points) == (0.0, 0.0)


def test_improvement_rejects_mismatched_counts():
    a = EvaluationReport(mmre=0.3, mmer=0.4, pred25=0.2, pred50=0.6, n=50)
    b = EvaluationReport(mmre=0.3, mmer=0.4, pred25=0.2, pred50=0.6, n=51)
    with pytest.raises(IncompatibleReportError):
        improvement(a, b)
