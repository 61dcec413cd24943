import numpy as np
import pytest

from entropic_particles import make_profile


@pytest.fixture
def lorentzian():
    return make_profile("lorentzian", {"S_max": 0.01})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


#: lines printed by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
