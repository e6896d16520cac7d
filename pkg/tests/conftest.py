import numpy as np
import pytest

from wignerbet import make_grid, state_from_spec, wigner

CATALOG_SPECS = [
    "gauss:0,0,1",
    "fock:0",
    "fock:1",
    "fock:2",
    "fock:3",
    "fockcat:0,1",
    "gausscat:2,0.75",
]

HBAR = 1.0


@pytest.fixture(scope="session")
def grid():
    return make_grid(-12.0, 12.0, 1024)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(-12.0, 12.0, 256)


@pytest.fixture(scope="session")
def catalog(grid):
    return {spec: state_from_spec(spec, grid, HBAR) for spec in CATALOG_SPECS}


@pytest.fixture(scope="session")
def wigner_catalog(catalog):
    """Phase-space densities of every catalog state, computed once per session."""
    return {spec: wigner(psi) for spec, psi in catalog.items()}


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
