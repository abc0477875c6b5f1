from functools import cmp_to_key
from itertools import combinations

import pytest


def _defn_cmp(a, b):
    """Lex order straight from the definition, on plain frozensets."""
    if a == b:
        return 0
    return -1 if min(a - b) < min(b - a) else 1


def lex_sorted(n, k):
    sets = [frozenset(c) for c in combinations(range(1, n + 1), k)]
    return [tuple(sorted(s)) for s in sorted(sets, key=cmp_to_key(_defn_cmp))]


@pytest.fixture
def lex_oracle():
    return lex_sorted


# --- acceptance criteria report ------------------------------------------

_CRITERIA: list[tuple[int, str, str, float]] = []
_SETUP: dict[str, float] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if report.when == "setup":
        _SETUP[item.nodeid] = report.duration
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            status = "XFAIL (documented defect)" if report.skipped else "XPASS"
        else:
            status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
        duration = report.duration + (_SETUP.get(item.nodeid, 0.0) if report.when == "call" else 0)
        _CRITERIA.append((mark.args[0], item.name, status, duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, status, duration in sorted(_CRITERIA, key=lambda r: r[0]):
        terminalreporter.write_line(
            f"criterion {number:>2}: {status:<26} {duration:8.2f} s  {name}")
    terminalreporter.write_line("(times include fixture setup; shared fixtures are charged "
                                "to the first test that uses them)")
