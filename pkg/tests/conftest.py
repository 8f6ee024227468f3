import numpy as np
import pytest

from fracchain import MarkovSpec

TWO_STATE = np.array([[0.5, 0.5], [0.25, 0.75]])
THREE_STATE = np.array([[0.2, 0.5, 0.3], [0.1, 0.6, 0.3], [0.4, 0.4, 0.2]])
ALPHAS = (0.3, 0.5, 0.8)

# one line per acceptance criterion, filled by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def two_state():
    return MarkovSpec(TWO_STATE)


@pytest.fixture
def three_state():
    return MarkovSpec(THREE_STATE)


def within_sigma(estimate, target, stderr, k=4.0):
    return abs(estimate - target) <= k * stderr


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
