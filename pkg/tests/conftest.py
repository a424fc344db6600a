import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from msptools import paper_example, shamir_msp

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixture_m():
    return paper_example("M")


@pytest.fixture(scope="session")
def fixture_mprime():
    return paper_example("M_prime")


@pytest.fixture(scope="session")
def shamir_1_4_11():
    return shamir_msp(1, 4, 11)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
