import numpy as np
import pytest

from netnorm import Network, NetworkPair

_ACCEPTANCE_LINES = []


def random_sign_matrix(rng, n, density=0.5):
    """Symmetric hollow matrix with entries in {-1, 0, 1}."""
    upper = rng.choice([-1.0, 0.0, 1.0], size=(n, n),
                       p=[density / 2, 1 - density, density / 2])
    m = np.triu(upper, 1)
    return m + m.T


def random_binary(rng, n, p):
    m = np.triu((rng.random((n, n)) < p).astype(float), 1)
    return m + m.T


def triangle():
    return Network(np.ones((3, 3)) - np.eye(3), ["a", "b", "c"])


def path3():
    w = np.zeros((3, 3))
    w[0, 1] = w[1, 0] = w[1, 2] = w[2, 1] = 1
    return Network(w, ["a", "b", "c"])


def empty(n, labels=None):
    return Network(np.zeros((n, n)), labels or [chr(ord("a") + i) for i in range(n)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def tri_vs_empty():
    return NetworkPair(triangle(), empty(3))


@pytest.fixture
def record_criterion():
    """Record one acceptance line; printed in the terminal summary."""

    def record(number, passed, detail):
        line = f"[criterion {number:>2}] {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
