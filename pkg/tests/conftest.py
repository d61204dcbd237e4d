import numpy as np
import pytest

from cesaro_hl.zeros import ZeroSet, load_zeros

# lines printed after the run by the acceptance suite
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def bundled_zeros():
    return load_zeros()


@pytest.fixture(scope="session")
def few_zeros():
    return load_zeros(max_count=40)


@pytest.fixture(scope="session")
def zeros_5000():
    return load_zeros(max_count=5000)


@pytest.fixture(scope="session")
def empty_zeros():
    return ZeroSet(np.array([]), "empty")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
