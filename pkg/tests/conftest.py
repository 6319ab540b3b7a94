import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def unit(n, i, j):
    E = np.zeros((n, n), dtype=complex)
    E[i, j] = 1.0
    return E
