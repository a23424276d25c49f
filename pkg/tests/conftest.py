import numpy as np
import pytest

from hypergraph_ssl import Hypergraph

# 3 vertices, edges {0,1} and {1,2}
CHAIN_H = np.array([[1, 0], [1, 1], [0, 1]])


def random_hypergraph(rng, n_max=50, e_max=15, n_min=3):
    """Random valid hypergraph with weights in (0, 2]."""
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(1, e_max + 1))
    H = np.zeros((n, m))
    for e in range(m):
        size = int(rng.integers(2, n + 1))
        H[rng.choice(n, size=size, replace=False), e] = 1
    for v in np.flatnonzero(H.sum(axis=1) == 0):
        H[v, rng.integers(m)] = 1
    w = 2.0 - rng.uniform(0.0, 2.0, size=m)
    return Hypergraph(H, w)


@pytest.fixture
def chain():
    return Hypergraph(CHAIN_H)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# (criterion, passed, detail) tuples recorded by test_acceptance.py
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
