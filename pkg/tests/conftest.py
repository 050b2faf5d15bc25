import numpy as np
import pytest

from sketchmatch.market import Instance, Node, Role

ACCEPTANCE_LINES = []


def seller(i, x, arrival=0, deadline=10):
    return Node(i, np.atleast_1d(np.asarray(x, dtype=float)), arrival, deadline, Role.SELLER)


def buyer(i, x, arrival=0, deadline=None):
    deadline = arrival if deadline is None else deadline
    return Node(i, np.atleast_1d(np.asarray(x, dtype=float)), arrival, deadline, Role.BUYER)


def undetermined(i, x, arrival, deadline):
    return Node(i, np.atleast_1d(np.asarray(x, dtype=float)), arrival, deadline, Role.UNDETERMINED)


def worked_example():
    """Hand-simulated in README: greedy ends with p = 7, pairs (0,0,1) and (1,1,6)."""
    sellers = [seller(0, 0.0, 0, 2), seller(1, 10.0, 1, 3)]
    buyers = [buyer(0, 1.0, 0), buyer(1, 4.0, 1), buyer(2, 13.0, 3)]
    return Instance(1, sellers, buyers)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
