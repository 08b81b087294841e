import numpy as np
import pytest

from sliceconf.profiles import Grid

# errors below this are round-off, not truncation
NOISE_FLOOR = 1e-11

# acceptance verdict lines, replayed after the run since pytest captures stdout
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def observed_ratio(coarse, fine):
    return coarse / fine if fine > 0 else float("inf")


def converges(coarse, fine, order):
    """Error drop on halving h is at least 80% of 2**order, or both errors sit at round-off."""
    if max(coarse, fine) <= NOISE_FLOOR:
        return True
    return observed_ratio(coarse, fine) >= 0.8 * 2**order


@pytest.fixture
def sphere_grid():
    return Grid(0.05, np.pi - 0.05, 401)


@pytest.fixture
def unit_grid():
    return Grid(0.5, 2.5, 201)
