import random

import pytest

from fpbackfire import (
    ConfigurationError,
    FuzzyLevel,
    FuzzyLevelSet,
    MembershipFunction,
    OutOfRangeError,
    ProgrammingTable,
    assign_fuzzy_level,
    build_fuzzy_levels,
    fuzzify,
    infer_ratio,
    load_fuzzy_levels,
    one_hot,
)
from fpbackfire.fuzzy import GRID_POINTS, output_half_widths

from .oracles import centroid_by_integration, ruspini_memberships

# The built-in 19-level configuration: (range_low, range_high, avg_ratio).
EXPECTED_LEVELS = [
    (0.0, 2.5, 128.0), (2.5, 3.0, 107.0), (3.0, 3.5, 91.0), (3.5, 4.0, 81.0),
    (4.0, 5.0, 67.0), (5.0, 6.0, 53.0), (6.0, 7.0, 46.0), (7.0, 8.0, 40.0),
    (8.0, 8.5, 38.0), (8.5, 9.0, 36.0), (9.0, 9.5, 34.0), (9.5, 11.0, 29.0),
    (11.0, 14.0, 23.0), (14.0, 16.0, 20.0), (16.0, 20.0, 16.0), (20.0, 23.0, 14.0),
    (23.0, 25.0, 13.0), (25.0, 27.0, 12.0), (27.0, 50.0, 6.0),
]


def test_default_levels_match_expected(levels):
    assert len(levels) == 19
    got = [(l.range_low, l.range_high, l.avg_ratio) for l in levels]
    assert got == EXPECTED_LEVELS
    assert levels[0].avg_ratio == 128.0
    assert levels[18].range_high == 50.0
    assert levels[18].avg_ratio == 6.0


def test_default_clamp_bounds_derive_from_table(levels):
    # ranges holding table languages take [min low, max high] over them
    assert (levels[0].clamp_min, levels[0].clamp_max) == (21.0, 427.0)
    assert (levels[1].clamp_min, levels[1].clamp_max) == (65.0, 170.0)
    assert (levels[9].clamp_min, levels[9].clamp_max) == (20.0, 51.0)
    assert (levels[16].clamp_min, levels[16].clamp_max) == (8.0, 17.0)
    # empty ranges fall back to [0.5, 1.5] x avg
    assert (levels[2].clamp_min, levels[2].clamp_max) == (45.5, 136.5)
    assert (levels[18].clamp_min, levels[18].clamp_max) == (3.0, 9.0)


def test_build_level_containing_only_c(table):
    built = build_fuzzy_levels(table, [2.0, 2.5], avg_ratios=[128.0])
    assert (built[0].clamp_min, built[0].clamp_max) == (21.0, 235.0)


def test_build_averages_contained_entries(table):
    built = build_fuzzy_levels(table, [0.0, 10.0])
    # Basic Assembly, C, Cobol, 3rd Gen, C++, Java all lie in (0, 10]
    assert built[0].avg_ratio == pytest.approx((320 + 128 + 107 + 80 + 53 + 36) / 6)

    subset = ProgrammingTable(tuple(e for e in table if e.name in ("C", "Cobol")))
    built = build_fuzzy_levels(subset, [0.0, 10.0])
    assert built[0].avg_ratio == pytest.approx(117.5)


def test_build_rejects_bad_boundaries(table):
    with pytest.raises(ConfigurationError):
        build_fuzzy_levels(table, [])
    with pytest.raises(ConfigurationError):
        build_fuzzy_levels(table, [5.0])
    with pytest.raises(ConfigurationError):
        build_fuzzy_levels(table, [0.0, 5.0, 3.0])


def test_build_rejects_empty_range_without_average(table):
    with pytest.raises(ConfigurationError, match="no table entry"):
        build_fuzzy_levels(table, [30.0, 40.0, 50.0])


def test_build_rejects_increasing_averages(table):
    with pytest.raises(ConfigurationError, match="non-increasing"):
        build_fuzzy_levels(table, [0.0, 5.0, 10.0], avg_ratios=[80.0, 90.0])


def test_level_set_invariants():
    a = FuzzyLevel(1, 0.0, 5.0, 5.0, 100.0, 50.0, 150.0)
    gap = FuzzyLevel(2, 6.0, 10.0, 10.0, 80.0, 40.0, 120.0)
    with pytest.raises(ConfigurationError, match="contiguous"):
        FuzzyLevelSet([a, gap])
    misnumbered = FuzzyLevel(3, 5.0, 10.0, 10.0, 80.0, 40.0, 120.0)
    with pytest.raises(ConfigurationError, match="1..n"):
        FuzzyLevelSet([a, misnumbered])
    with pytest.raises(ConfigurationError):
        FuzzyLevelSet([])


def test_fuzzy_level_invariants():
    with pytest.raises(ConfigurationError):
        FuzzyLevel(1, 5.0, 5.0, 5.0, 100.0, 50.0, 150.0)  # empty range
    with pytest.raises(ConfigurationError):
        FuzzyLevel(1, 0.0, 5.0, 6.0, 100.0, 50.0, 150.0)  # anchor outside range
    with pytest.raises(ConfigurationError):
        FuzzyLevel(1, 0.0, 5.0, 5.0, 200.0, 50.0, 150.0)  # ratio above clamp


def test_assign_examples(levels):
    assert assign_fuzzy_level(levels, 4.0) == 4
    assert assign_fuzzy_level(levels, 2.5) == 1
    assert assign_fuzzy_level(levels, 50.0) == 19
    with pytest.raises(OutOfRangeError) as err:
        assign_fuzzy_level(levels, 60.0)
    assert err.value.covered == (0.0, 50.0)
    with pytest.raises(OutOfRangeError):
        assign_fuzzy_level(levels, 0.0)  # lower edge is exclusive


def test_one_hot(levels):
    vector = one_hot(levels, 4.0)
    assert vector == tuple(1 if i == 3 else 0 for i in range(19))
    assert sum(vector) == 1


def test_fuzzify_examples(levels):
    at_anchor = fuzzify(levels, 3.0)
    assert at_anchor[1] == 1.0
    assert sum(at_anchor) == 1.0

    midway = fuzzify(levels, 2.75)
    assert midway[0] == pytest.approx(0.5)
    assert midway[1] == pytest.approx(0.5)
    assert sum(v > 0 for v in midway) == 2

    below_first_anchor = fuzzify(levels, 1.0)
    assert below_first_anchor[0] == 1.0
    assert sum(below_first_anchor) == 1.0

    with pytest.raises(OutOfRangeError):
        fuzzify(levels, 51.0)


def test_fuzzify_partition_of_unity(levels):
    rng = random.Random(7)
    for _ in range(1000):
        level = rng.uniform(1e-9, 50.0)
        memberships = fuzzify(levels, level)
        assert abs(sum(memberships) - 1.0) <= 1e-9
        assert sum(1 for v in memberships if v > 0) <= 2
        oracle = ruspini_memberships(levels.anchors, level)
        assert memberships == pytest.approx(oracle)


def test_infer_ratio_frozen_examples(levels):
    assert infer_ratio(levels, levels.avg_ratios, 3.0) == pytest.approx(107.0, abs=0.5)
    assert infer_ratio(levels, levels.avg_ratios, 25.0) == pytest.approx(13.0, abs=0.5)
    between = infer_ratio(levels, levels.avg_ratios, 2.75)
    assert 107.0 < between < 128.0
    oracle = centroid_by_integration(levels.anchors, levels.avg_ratios, 2.75)
    assert between == pytest.approx(oracle, rel=1e-3)


def test_infer_ratio_anchor_exactness(levels):
    fine_points = (GRID_POINTS - 1) * 10 + 1
    for level in levels:
        got = infer_ratio(levels, levels.avg_ratios, level.anchor)
        assert got == pytest.approx(level.avg_ratio, abs=0.5)
        oracle = centroid_by_integration(
            levels.anchors, levels.avg_ratios, level.anchor, points=fine_points
        )
        assert abs(got - oracle) <= 1e-3 * abs(oracle)


def test_infer_ratio_monotone_interpolation(levels):
    rng = random.Random(11)
    ratios = levels.avg_ratios
    for _ in range(300):
        x = rng.uniform(1e-9, 50.0)
        got = infer_ratio(levels, ratios, x)
        active = [i for i, v in enumerate(fuzzify(levels, x)) if v > 0]
        lo = min(ratios[i] for i in active)
        hi = max(ratios[i] for i in active)
        assert lo - 0.5 <= got <= hi + 0.5


def test_infer_ratio_matches_fine_grid_oracle_at_random_levels(levels):
    rng = random.Random(13)
    fine_points = (GRID_POINTS - 1) * 10 + 1
    for _ in range(60):
        x = rng.uniform(1e-9, 50.0)
        got = infer_ratio(levels, levels.avg_ratios, x)
        oracle = centroid_by_integration(levels.anchors, levels.avg_ratios, x, points=fine_points)
        assert abs(got - oracle) <= 1e-3 * abs(oracle)


def test_infer_ratio_validates_peaks(levels):
    with pytest.raises(ConfigurationError):
        infer_ratio(levels, levels.avg_ratios[:-1], 3.0)
    too_high = list(levels.avg_ratios)
    too_high[0] = levels[0].clamp_max + 1
    with pytest.raises(ConfigurationError, match="clamp"):
        infer_ratio(levels, too_high, 3.0)
    with pytest.raises(OutOfRangeError):
        infer_ratio(levels, levels.avg_ratios, -1.0)


def test_output_half_widths_rules():
    assert output_half_widths([128.0, 107.0, 91.0]) == (21.0, 16.0, 16.0)
    assert output_half_widths([40.0, 40.0]) == (1.0, 1.0)  # floored when tied
    assert output_half_widths([100.0]) == (25.0,)  # no neighbor: quarter of peak


def test_membership_function_shapes():
    tri = MembershipFunction("triangle", 2.5, 3.0, 3.5)
    assert tri.value(3.0) == 1.0
    assert tri.value(2.75) == pytest.approx(0.5)
    assert tri.value(2.5) == 0.0
    assert tri.value(4.0) == 0.0

    left = MembershipFunction("shoulder", 2.5, 2.5, 3.0)
    assert left.value(1.0) == 1.0
    assert left.value(2.75) == pytest.approx(0.5)
    assert left.value(3.5) == 0.0

    right = MembershipFunction("shoulder", 27.0, 50.0, 50.0)
    assert right.value(60.0) == 1.0
    assert right.value(27.0) == 0.0

    with pytest.raises(ConfigurationError):
        MembershipFunction("triangle", 3.0, 3.0, 3.5)
    with pytest.raises(ConfigurationError):
        MembershipFunction("shoulder", 2.0, 3.0, 4.0)


def test_input_membership_functions_partition(levels):
    mfs = levels.input_membership_functions()
    assert len(mfs) == 19
    assert mfs[0].kind == "shoulder" and mfs[-1].kind == "shoulder"
    assert all(mf.kind == "triangle" for mf in mfs[1:-1])
    # graded membership agrees with the function objects
    for x in (1.0, 2.75, 9.25, 30.0, 50.0):
        graded = fuzzify(levels, x)
        direct = tuple(mf.value(x) for mf in mfs)
        assert graded == pytest.approx(direct)


def test_with_ratios_preserves_geometry(levels):
    replaced = levels.with_ratios([l.clamp_min for l in levels])
    assert replaced.anchors == levels.anchors
    assert [l.avg_ratio for l in replaced] == [l.clamp_min for l in levels]
    with pytest.raises(ConfigurationError):
        levels.with_ratios([1.0])


def test_load_fuzzy_levels_default_is_builtin(levels):
    assert load_fuzzy_levels(None) == levels
    assert load_fuzzy_levels(None).fingerprint() == levels.fingerprint()


def test_parse_fuzzy_levels_rejects_increasing_ratios(tmp_path):
    path = tmp_path / "levels.csv"
    path.write_text(
        "index,range_low,range_high,avg_ratio,clamp_min,clamp_max\n"
        "1,0,10,50,25,75\n"
        "2,10,50,60,30,90\n",
        encoding="utf-8",
    )
    from fpbackfire import ParseError

    with pytest.raises(ParseError, match="non-increasing"):
        load_fuzzy_levels(path)
