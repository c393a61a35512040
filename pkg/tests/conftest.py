import numpy as np
import pytest

from tfbounds.hermite import build_hermite_basis
from tfbounds.numerics import default_grid
from tfbounds.pswf import build_pswf_basis


@pytest.fixture(scope="session")
def grid():
    return default_grid()


@pytest.fixture(scope="session")
def hermite20(grid):
    return build_hermite_basis(20, grid)


@pytest.fixture(scope="session")
def pswf11(grid):
    return build_pswf_basis(1.0, 1.0, 12, grid)


@pytest.fixture(scope="session")
def pswf22(grid):
    return build_pswf_basis(2.0, 2.0, 18, grid)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240)
