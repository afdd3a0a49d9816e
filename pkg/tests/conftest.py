from pathlib import Path

import pytest

from primecover.cube import parse_cube
from primecover.primes import SumOfProducts
from primecover.triples import TriplesTable

DATA = Path(__file__).parent / "data"

# the worked cascade example: 13 rows, seed {32}
FIG1_ROWS = [
    (24, 67, 0), (25, 32, 0), (26, 32, 0), (27, 32, 0), (30, 32, 0), (30, 35, 37),
    (31, 25, 37), (32, 27, 31), (33, 24, 39), (35, 27, 0), (35, 30, 0), (37, 30, 0),
    (38, 35, 40),
]


@pytest.fixture
def fig1() -> TriplesTable:
    return TriplesTable(FIG1_ROWS)


def sop(n: int, *terms: str) -> SumOfProducts:
    return SumOfProducts(n, tuple(parse_cube(t, n) for t in terms))


def cubes(n: int, *terms: str):
    return [parse_cube(t, n) for t in terms]


def read_lines(name: str) -> list[str]:
    return [line.strip() for line in (DATA / name).read_text().splitlines() if line.strip()]


# one summary line per acceptance criterion, whatever the outcome
_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _CRITERIA[item.nodeid] = (marker.args[0], status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status in _CRITERIA.values():
        terminalreporter.write_line(f"{status}  {label}")
