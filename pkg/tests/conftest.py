import logging

import numpy as np
import pytest
from hypothesis import settings

from reslearn.synth import barbell, cycle_graph, fixture_graphs, path_graph

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_CRITERIA: dict[str, tuple[str, str]] = {}


@pytest.fixture(autouse=True)
def _quiet_logs(caplog):
    caplog.set_level(logging.ERROR, logger="reslearn")


@pytest.fixture
def bar():
    return barbell()


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture(scope="session")
def small_fixtures():
    return fixture_graphs(9)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.skipped):
        return
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    detail = dict(report.user_properties).get("detail", "")
    outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    _CRITERIA[crit] = (outcome, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_CRITERIA, key=lambda c: int(c.split()[0])):
        outcome, detail = _CRITERIA[crit]
        terminalreporter.write_line(f"criterion {crit}: {outcome}  {detail}")
