import numpy as np
import pytest

from rhelasto.medium import Medium


@pytest.fixture(scope="session")
def poisson():
    return Medium.poisson_solid()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def off_cut_samples(rng, n, radius=6.0):
    """Random complex points kept away from the imaginary axis and the origin."""
    x = rng.uniform(-radius, radius, n)
    x = np.where(np.abs(x) < 0.05, 0.05 + np.abs(x), x)
    y = rng.uniform(-radius, radius, n)
    return x + 1j * y


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
