"""Shared fixtures and suite-level wiring.

The wall-clock acceptance test must observe the whole run, so collection
moves it to the very end of the session.
"""
import time

import numpy as np
import pytest

SESSION_T0 = time.perf_counter()

# one line per acceptance criterion, echoed after the test summary
ACCEPTANCE_LINES: list[str] = []


def pytest_collection_modifyitems(items):
    last = [it for it in items if "wall_clock" in it.name]
    rest = [it for it in items if "wall_clock" not in it.name]
    items[:] = rest + last


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log() -> list[str]:
    return ACCEPTANCE_LINES


@pytest.fixture(scope="session")
def session_start() -> float:
    return SESSION_T0


@pytest.fixture
def rng():
    return np.random.default_rng(0)
