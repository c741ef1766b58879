import numpy as np
import pytest

from reflect6v import validation
from reflect6v.homogeneous import HomogeneousPoint
from reflect6v.weights import DEMO_ETA, DEMO_LAMBDA, DEMO_MU, DEMO_XI


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def demo():
    return HomogeneousPoint(DEMO_LAMBDA, DEMO_MU, DEMO_ETA, DEMO_XI)


def draw(rng, N, complex_part=None):
    return validation.random_params(rng, N, complex_part)


def rel(a, b):
    return abs(a - b) / abs(b)


# one status line per acceptance criterion, echoed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
