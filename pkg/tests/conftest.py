import numpy as np
import pytest

from gna.grid import DEFAULT_GRID
from gna.netexpr import evaluate

from acceptance_log import RESULTS


@pytest.fixture
def grid():
    return DEFAULT_GRID


@pytest.fixture
def c(grid):
    return evaluate("chi(even(k))", grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[num])
