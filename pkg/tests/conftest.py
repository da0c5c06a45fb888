import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("default")


@pytest.fixture(scope="session")
def q2():
    from pebblecover.graphs import build_hypercube

    return build_hypercube(2)


@pytest.fixture(scope="session")
def q3():
    from pebblecover.graphs import build_hypercube

    return build_hypercube(3)


_ACCEPTANCE: dict[str, list] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or (rep.when != "call" and rep.passed):
        return
    criterion, summary = mark.args
    entry = _ACCEPTANCE.setdefault(criterion, [summary, True, 0.0])
    entry[1] = entry[1] and rep.passed
    entry[2] += rep.duration


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE, key=lambda k: (len(k), k)):
        summary, ok, secs = _ACCEPTANCE[criterion]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'}  criterion {criterion}: {summary} ({secs:.1f}s)"
        )
