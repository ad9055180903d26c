import numpy as np
import pytest

from hexlogit.network import TriadicNetwork, bipartite_network


def random_triadic(rng, n, density, p=1):
    y = rng.random((n, n, n)) < density
    return TriadicNetwork.from_adjacency(y, covariates=rng.normal(size=(n, n, n, p)))


def random_bipartite(rng, n, density, p=1):
    y = rng.random((n, n)) < density
    return bipartite_network(n, np.argwhere(y), covariates=rng.normal(size=(n, n, p)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
