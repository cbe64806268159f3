import numpy as np
import pytest

from s3contact import catalog

ACCEPTANCE_LINES = []


@pytest.fixture
def clifford():
    return catalog.clifford_torus()


@pytest.fixture
def sphere():
    return catalog.geodesic_sphere()


@pytest.fixture
def torus_pi3():
    return catalog.product_torus(np.pi / 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
