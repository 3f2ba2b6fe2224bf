import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ssz.cli import parse_curves

DATA = Path(__file__).parent / "data"
CORPUS = DATA / "curves.csv"
RANK_TWO_EXTRA = DATA / "rank_two_extra.csv"

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def corpus():
    return parse_curves(CORPUS)


@pytest.fixture(scope="session")
def by_label(corpus):
    return {r.label: r.curve() for r in corpus}


# -- acceptance summary: one line per criterion ------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _ACCEPTANCE[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        status = "PASS" if _ACCEPTANCE[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
