import pytest

from delayed_logistic import SimParams, simulate

_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects one pass/fail line per acceptance criterion."""
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def small_path():
    return simulate(SimParams(N=100, tau=1.0, mu=0.5, T=3.0, grid_dt=0.01, seed=5))
