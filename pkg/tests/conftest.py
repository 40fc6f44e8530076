"""
Shared fixtures for the correlation dynamics tests
"""

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from dephasing_model import DephasingModel  # noqa: E402
from state_factory import (  # noqa: E402
    BellMixture, StateFamily, StateFamilySpec, bell_state, interference_mixture,
)

INTERFERENCE_MIX = BellMixture(0.0, 0.75, 0.0, 0.25)
FOUR_MIX = BellMixture(0.09, 0.09, 0.81, 0.01)


def random_density_matrix(rng, dim=4, rank=None):
    """Random mixed state rho = G G^dagger / Tr(G G^dagger)"""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_mixture(rng):
    return BellMixture(*rng.dirichlet(np.ones(4)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def model():
    return DephasingModel()


@pytest.fixture
def phi_minus():
    return bell_state('phi-')


@pytest.fixture
def maximally_mixed():
    return np.eye(4, dtype=np.complex128) / 4


@pytest.fixture
def interference_spec():
    return StateFamilySpec(StateFamily.INTERFERENCE, b=0.75)


@pytest.fixture
def four_mix_spec():
    return StateFamilySpec(StateFamily.FOUR_MIX, b=0.9, r=0.9)


@pytest.fixture
def interference_075():
    return interference_mixture(0.75)
