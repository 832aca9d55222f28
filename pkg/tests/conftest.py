import numpy as np
import pytest

from eigenshift.experiments import dk_pair


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run the full-size acceptance checks",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size acceptance check, needs --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def random_symmetric(rng):
    def _make(n, scale=1.0):
        G = rng.standard_normal((n, n))
        return scale * (G + G.T) / 2.0

    return _make


@pytest.fixture
def dk_matrices():
    """
    Signal and noise on which the Davis-Kahan bound is tight up to its constant
    """
    return dk_pair(1e-3)


@pytest.fixture
def diagonal_problem():
    """
    ``A = diag(10, 9, 1, 0)`` with a hand-made sparse symmetric noise
    """
    A = np.diag([10.0, 9.0, 1.0, 0.0])
    E = np.zeros((4, 4))
    E[0, 1] = E[1, 0] = 0.5
    E[0, 2] = E[2, 0] = 0.3
    E[1, 2] = E[2, 1] = 0.2
    return A, E
