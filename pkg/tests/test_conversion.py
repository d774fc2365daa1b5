import random

import pytest

from fpbackfire import (
    ConfigurationError,
    InvalidRatioError,
    LanguageEntry,
    ParseError,
    ProgrammingTable,
    ProjectRecord,
    RecordValidationError,
    UnknownLanguageError,
    backfire,
    level_for_language,
    load_programming_table,
    reverse_backfire,
)
from fpbackfire.conversion import parse_programming_table

EXPECTED_DEFAULT_ROWS = [
    ("Basic Assembly", 1.0, 213.0, 320.0, 427.0),
    ("C", 2.5, 21.0, 128.0, 235.0),
    ("Cobol", 3.0, 65.0, 107.0, 170.0),
    ("3rd Generation", 4.0, 45.0, 80.0, 125.0),
    ("C++", 6.0, 30.0, 53.0, 125.0),
    ("Java", 9.0, 20.0, 36.0, 51.0),
    ("4th Generation", 16.0, 16.0, 20.0, 24.0),
    ("SQL", 25.0, 8.0, 13.0, 17.0),
]


def test_backfire_examples():
    assert backfire(1, 320) == 320
    assert backfire(0, 53) == 0
    assert backfire(100, 53) == 5300


def test_backfire_rejects_bad_ratio():
    with pytest.raises(InvalidRatioError):
        backfire(10, 0)
    with pytest.raises(InvalidRatioError):
        backfire(10, -3)


def test_reverse_backfire_examples():
    assert reverse_backfire(320, 320) == 1
    assert reverse_backfire(5300, 53) == 100
    assert reverse_backfire(0, 36) == 0
    with pytest.raises(InvalidRatioError):
        reverse_backfire(100, 0)


def test_round_trip_random_pairs():
    rng = random.Random(1)
    for _ in range(10_000):
        fp = rng.uniform(1e-3, 1e5)
        ratio = rng.uniform(1e-3, 1e3)
        back = reverse_backfire(backfire(fp, ratio), ratio)
        assert abs(back - fp) <= 1e-12 * fp


def test_backfire_monotonic():
    assert backfire(10, 50) < backfire(11, 50)
    assert backfire(10, 50) < backfire(10, 51)


def test_default_table_matches_expected_rows(table):
    assert len(table) == 8
    got = [(e.name, e.level, e.low, e.mean, e.high) for e in table]
    assert got == EXPECTED_DEFAULT_ROWS


def test_level_for_language(table):
    assert level_for_language(table, "Cobol") == 3.0
    assert level_for_language(table, "Java") == 9.0
    assert level_for_language(table, "  jAvA  ") == 9.0  # trimmed, case-insensitive
    with pytest.raises(UnknownLanguageError, match="Klingon"):
        level_for_language(table, "Klingon")


def test_language_entry_invariants():
    with pytest.raises(ConfigurationError):
        LanguageEntry("X", 1.0, 10, 5, 20)  # mean < low
    with pytest.raises(ConfigurationError):
        LanguageEntry("X", 0.0, 1, 2, 3)  # level must be positive
    with pytest.raises(ConfigurationError):
        LanguageEntry("X", 1.0, 0, 2, 3)  # low must be positive


def test_programming_table_rejects_duplicates():
    entry = LanguageEntry("Java", 9.0, 20, 36, 51)
    dupe = LanguageEntry("JAVA", 9.0, 20, 36, 51)
    with pytest.raises(ConfigurationError, match="duplicate"):
        ProgrammingTable((entry, dupe))
    with pytest.raises(ConfigurationError):
        ProgrammingTable(())


def test_project_record_validation():
    record = ProjectRecord("p1", "Java", 100, 3600)
    assert record.ufp == 100
    with pytest.raises(RecordValidationError, match="p2"):
        ProjectRecord("p2", "Java", -5, 3600)
    with pytest.raises(RecordValidationError, match="p3"):
        ProjectRecord("p3", "Java", 5, 0)


def test_load_default_table():
    loaded = load_programming_table(None)
    assert len(loaded) == 8
    sql = loaded.find("SQL")
    assert (sql.level, sql.mean) == (25.0, 13.0)


def test_load_table_from_file(tmp_path, table):
    path = tmp_path / "langs.csv"
    path.write_text(
        "name,level,low,mean,high\nJava,9.0,20,36,51\nSQL,25.0,8,13,17\n",
        encoding="utf-8",
    )
    loaded = load_programming_table(path)
    assert [e.name for e in loaded] == ["Java", "SQL"]


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_programming_table(["name,level,low,mean,high", "X,1.0,10,5,20"])
    assert err.value.line == 2

    with pytest.raises(ParseError) as err:
        parse_programming_table(["name,level,low,mean,high", "A,1,1,2,3", "a,2,1,2,3"])
    assert err.value.line == 3
    assert "duplicate" in str(err.value)

    with pytest.raises(ParseError):
        parse_programming_table([])

    with pytest.raises(ParseError) as err:
        parse_programming_table(["wrong,header"])
    assert err.value.line == 1
