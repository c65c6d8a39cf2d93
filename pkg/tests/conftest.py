"""Shared test helpers and the acceptance-criteria summary hook."""
import numpy as np
import pytest

ACCEPTANCE_RESULTS = {}


def record_criterion(number, passed, detail):
    """Register an acceptance-criterion outcome for the summary report."""
    ACCEPTANCE_RESULTS[number] = (passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[n]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {n:2d}: {status} - {detail}")


@pytest.fixture(scope="session")
def rng():
    return np.random.RandomState(20260823)
