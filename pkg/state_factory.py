#!/usr/bin/env python3
"""
State Factory Module
------------------
Builds the Bell basis, Bell-diagonal states and the two prepared input
families, and converts between density matrices and Bell weights
"""

from dataclasses import dataclass, field
from enum import Enum
import logging

import numpy as np

from exceptions import ValidationError
from linalg_core import trace_distance, validate_density_matrix
from matrix_io import matrix_from_dict, matrix_to_dict

logger = logging.getLogger('correlation_dynamics.state_factory')

WEIGHT_TOL = 1e-10
BELL_DIAGONAL_TOL = 1e-9


class BellState(Enum):
    """The four Bell states, in mixture-weight order (a, b, c, d)"""
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


class StateFamily(Enum):
    """Input state families"""
    INTERFERENCE = "interference"
    FOUR_MIX = "four-mix"
    EXPLICIT = "explicit"


_SQRT_HALF = 1 / np.sqrt(2)

# Bell vectors over {|00>, |01>, |10>, |11>}
_BELL_VECTORS = {
    BellState.PHI_PLUS: np.array([1, 0, 0, 1], dtype=np.complex128) * _SQRT_HALF,
    BellState.PHI_MINUS: np.array([1, 0, 0, -1], dtype=np.complex128) * _SQRT_HALF,
    BellState.PSI_PLUS: np.array([0, 1, 1, 0], dtype=np.complex128) * _SQRT_HALF,
    BellState.PSI_MINUS: np.array([0, 1, -1, 0], dtype=np.complex128) * _SQRT_HALF,
}


def _check_unit_interval(name, value):
    if value is None or not (-WEIGHT_TOL <= float(value) <= 1 + WEIGHT_TOL):
        raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
    return min(max(float(value), 0.0), 1.0)


@dataclass(frozen=True)
class BellMixture:
    """Weights of |Phi+>, |Phi->, |Psi+>, |Psi->"""
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ('a', 'b', 'c', 'd'):
            object.__setattr__(self, name, _check_unit_interval(name, getattr(self, name)))
        total = self.a + self.b + self.c + self.d
        if abs(total - 1.0) > WEIGHT_TOL:
            raise ValidationError(f"Bell weights must sum to 1, got {total:.12f}")

    @property
    def weights(self):
        """Weights as an (a, b, c, d) tuple"""
        return (self.a, self.b, self.c, self.d)

    @property
    def lambda_max(self):
        """Largest Bell weight, i.e. the largest eigenvalue of the state"""
        return max(self.weights)

    def to_dict(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


def bell_vector(kind):
    """State vector of a Bell state in the canonical basis"""
    return _BELL_VECTORS[BellState(kind)].copy()


def bell_state(kind):
    """
    Rank-1 projector onto a Bell state

    Args:
        kind (BellState or str): 'phi+', 'phi-', 'psi+' or 'psi-'

    Returns:
        ndarray: 4x4 projector
    """
    vec = bell_vector(kind)
    return np.outer(vec, vec.conj())


def from_mixture(mixture):
    """
    Density matrix a P(Phi+) + b P(Phi-) + c P(Psi+) + d P(Psi-)

    Args:
        mixture (BellMixture): Bell weights

    Returns:
        ndarray: 4x4 density matrix
    """
    rho = np.zeros((4, 4), dtype=np.complex128)
    for kind, weight in zip(BellState, mixture.weights):
        rho += weight * bell_state(kind)
    return rho


def interference_mixture(b):
    """Bell weights of the two-Bell interference family: (0, b, 0, 1-b)"""
    b = _check_unit_interval('b', b)
    return BellMixture(0.0, b, 0.0, 1.0 - b)


def four_mix_mixture(b, r):
    """Bell weights of the four-Bell family: (dR, b(1-R), bR, d(1-R)) with d = 1-b"""
    b = _check_unit_interval('b', b)
    r = _check_unit_interval('R', r)
    d = 1.0 - b
    return BellMixture(d * r, b * (1 - r), b * r, d * (1 - r))


def interference_state(b):
    """State b P(Phi-) + (1-b) P(Psi-)"""
    return from_mixture(interference_mixture(b))


def four_mix_state(b, r):
    """State dR P(Phi+) + b(1-R) P(Phi-) + bR P(Psi+) + d(1-R) P(Psi-)"""
    return from_mixture(four_mix_mixture(b, r))


def to_mixture(rho):
    """
    Project a state onto the Bell basis

    Args:
        rho (array-like): Density matrix

    Returns:
        tuple: (BellMixture, residual) where residual is the trace distance
            between rho and its Bell-diagonal truncation
    """
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise ValidationError(f"to_mixture expects a 4x4 matrix, got {rho.shape}")
    weights = [float(np.real(bell_vector(kind).conj() @ rho @ bell_vector(kind)))
               for kind in BellState]
    weights = np.clip(weights, 0.0, 1.0)
    weights = weights / weights.sum()
    mixture = BellMixture(*weights)
    residual = trace_distance(rho, from_mixture(mixture))
    return mixture, residual


def bell_diagonal_mixture(rho, tol=BELL_DIAGONAL_TOL):
    """BellMixture of rho when it is Bell-diagonal within tol, else None"""
    mixture, residual = to_mixture(rho)
    return mixture if residual <= tol else None


@dataclass(frozen=True)
class StateFamilySpec:
    """An input state: a parametrized family or an explicit matrix"""
    family: StateFamily
    b: float = None
    r: float = None
    matrix: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        try:
            family = StateFamily(self.family)
        except ValueError:
            raise ValidationError(f"unknown state family {self.family!r}")
        object.__setattr__(self, 'family', family)
        if family is StateFamily.INTERFERENCE:
            object.__setattr__(self, 'b', _check_unit_interval('b', self.b))
        elif family is StateFamily.FOUR_MIX:
            object.__setattr__(self, 'b', _check_unit_interval('b', self.b))
            object.__setattr__(self, 'r', _check_unit_interval('R', self.r))
        else:
            if self.matrix is None:
                raise ValidationError("explicit state family requires a matrix")
            object.__setattr__(self, 'matrix', validate_density_matrix(self.matrix, dim=4))

    def mixture(self):
        """Bell weights of the state, or None for a non-Bell-diagonal explicit matrix"""
        if self.family is StateFamily.INTERFERENCE:
            return interference_mixture(self.b)
        if self.family is StateFamily.FOUR_MIX:
            return four_mix_mixture(self.b, self.r)
        return bell_diagonal_mixture(self.matrix)

    def build(self):
        """Density matrix of the prepared state"""
        if self.family is StateFamily.EXPLICIT:
            return self.matrix.copy()
        return from_mixture(self.mixture())

    def label(self):
        if self.family is StateFamily.INTERFERENCE:
            return f"interference(b={self.b:g})"
        if self.family is StateFamily.FOUR_MIX:
            return f"four-mix(b={self.b:g}, R={self.r:g})"
        return "explicit"

    def to_dict(self):
        data = {"family": self.family.value}
        if self.b is not None:
            data["b"] = self.b
        if self.r is not None:
            data["R"] = self.r
        if self.matrix is not None:
            data["matrix"] = matrix_to_dict(self.matrix)
        return data

    @classmethod
    def from_dict(cls, data):
        matrix = data.get("matrix")
        return cls(
            family=data["family"],
            b=data.get("b"),
            r=data.get("R"),
            matrix=matrix_from_dict(matrix) if matrix is not None else None,
        )
