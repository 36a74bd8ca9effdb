import numpy as np
import pytest


@pytest.fixture
def dirichlet_weights():
    def draw(P, alpha=1.0, seed=0):
        from pfresample.simdata import DirichletSpec, sample_dirichlet

        return sample_dirichlet(DirichletSpec(P, alpha, seed))

    return draw


def binomial_band(mean, expected, sd, n, k=3.0):
    """True when every coordinate of ``mean`` is within ``k`` standard errors."""
    se = np.asarray(sd) / np.sqrt(n)
    return np.abs(np.asarray(mean) - np.asarray(expected)) <= k * se


# One line per acceptance criterion, collected by tests/test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
