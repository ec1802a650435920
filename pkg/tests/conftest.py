from itertools import combinations
from pathlib import Path

import pytest

from coauthnet.graph import build_graph

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def int_graph(n, edges):
    """Graph whose node ``i`` is labelled ``str(i)`` and has id ``i``."""
    return build_graph(((str(u), str(v)) for u, v in edges), nodes=[str(i) for i in range(n)])


def path_edges(n):
    return [(i, i + 1) for i in range(n - 1)]


def clique_edges(nodes):
    return list(combinations(nodes, 2))


@pytest.fixture
def triangle():
    return int_graph(3, clique_edges(range(3)))


@pytest.fixture
def two_triangles():
    return int_graph(6, clique_edges(range(3)) + clique_edges(range(3, 6)))


@pytest.fixture
def p3():
    return int_graph(3, path_edges(3))


@pytest.fixture
def p5():
    return int_graph(5, path_edges(5))


@pytest.fixture
def star4():
    """Star S4: center 0 with four leaves."""
    return int_graph(5, [(0, i) for i in range(1, 5)])


@pytest.fixture
def fixture_path():
    return DATA / "papers50.tsv"


FIXTURE_SCHEMA = {
    "paper_id": "PaperID",
    "author_id": "AuthorID",
    "author_name": "AuthorName",
    "affiliation_id": "AffiliationID",
    "affiliation_name": "AffiliationName",
    "year": "Year",
    "field_id": "FieldID",
}


# -- acceptance reporting: one PASS/FAIL line per criterion -------------------

_criteria: dict[str, bool] = {}


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("acceptance")
    if marker and (report.when == "call" or report.failed):
        name = marker.args[0]
        _criteria[name] = _criteria.get(name, True) and report.passed
    return report


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _criteria.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
