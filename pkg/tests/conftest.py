import pytest

from fpbackfire import default_fuzzy_levels, default_programming_table


@pytest.fixture(scope="session")
def table():
    return default_programming_table()


@pytest.fixture(scope="session")
def levels():
    return default_fuzzy_levels()
