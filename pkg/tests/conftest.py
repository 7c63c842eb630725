"""Shared fixtures and the acceptance report hook."""

from pathlib import Path

import pytest

from toricurve.fan import load_fan, preset

FIXTURES = Path(__file__).parent / "fixtures"

# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def p3():
    return preset("p3")


@pytest.fixture(scope="session")
def p1p1p1():
    return preset("p1p1p1")


@pytest.fixture(scope="session")
def blp3():
    return preset("bl-p3-point")


@pytest.fixture(scope="session")
def nonprojective():
    return load_fan(FIXTURES / "nonprojective.fan")
