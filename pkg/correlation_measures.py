#!/usr/bin/env python3
"""
Correlation Measures Module
-------------------------
Total, classical and quantum correlation, concurrence, entanglement of
formation, relative entropy of entanglement and the non-entanglement
quantum correlation of two-qubit states
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from exceptions import ValidationError
from linalg_core import (
    Subsystem, binary_entropy, hermitian_eig, partial_trace, psd_sqrt,
    spectrum_entropy, validate_density_matrix, vn_entropy,
)
from measurement_optimizer import MeasurementDirection, MeasurementOptimizer, conditional_entropies
from state_factory import BELL_DIAGONAL_TOL, to_mixture

logger = logging.getLogger('correlation_dynamics.correlation_measures')

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

# Measurement directions along the Bloch axes
AXIS_DIRECTIONS = {
    'x': MeasurementDirection(math.pi / 4, 0.0),
    'y': MeasurementDirection(math.pi / 4, math.pi / 2),
    'z': MeasurementDirection(0.0, 0.0),
}

BRANCH_TIE_TOL = 1e-12


def bloch_direction(direction):
    """Unit Bloch vector of a measurement direction"""
    return direction.bloch_vector()


def _check_unit(name, value):
    if value is None or not (0.0 <= value <= 1.0):
        raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
    return float(value)


def _mutual_information(rho, joint_entropy):
    return (vn_entropy(partial_trace(rho, Subsystem.A))
            + vn_entropy(partial_trace(rho, Subsystem.B))
            - joint_entropy)


def mutual_information(rho):
    """
    Quantum mutual information S(rho_A) + S(rho_B) - S(rho_AB)

    Args:
        rho (array-like): 4x4 density matrix

    Returns:
        float: Total correlation in bits
    """
    rho = validate_density_matrix(rho, dim=4)
    return _mutual_information(rho, vn_entropy(rho))


def conditional_entropy_after_B(rho, direction, single_outcome=False):
    """
    Conditional entropy of A after projecting B onto |l> and |l_perp>

    Args:
        rho (array-like): 4x4 density matrix
        direction (MeasurementDirection): Measurement direction
        single_outcome (bool): Only the entropy of the |l> outcome

    Returns:
        float: Entropy in bits
    """
    rho = validate_density_matrix(rho, dim=4)
    value = conditional_entropies(rho, direction.theta, direction.phi, single_outcome=single_outcome)
    return float(value)


def classical_correlation_numeric(rho, grid_theta=64, grid_phi=32, refine_iters=40, optimizer=None):
    """
    Classical correlation by direct minimization over measurements on B

    Args:
        rho (array-like): 4x4 density matrix
        grid_theta (int): Polar grid intervals
        grid_phi (int): Azimuthal grid points
        refine_iters (int): Golden-section iterations per coordinate
        optimizer (MeasurementOptimizer): Preconfigured optimizer; overrides
            the grid arguments

    Returns:
        tuple: (C in bits, minimizing MeasurementDirection)
    """
    rho = validate_density_matrix(rho, dim=4)
    if optimizer is None:
        optimizer = MeasurementOptimizer({
            'grid_theta': grid_theta,
            'grid_phi': grid_phi,
            'refine_iters': refine_iters,
        })
    min_entropy, direction = optimizer.minimize(rho)
    return vn_entropy(partial_trace(rho, Subsystem.A)) - min_entropy, direction


def correlation_matrix(mixture):
    """
    Diagonal correlation coefficients <sigma_i x sigma_i> of a Bell mixture

    Args:
        mixture (BellMixture): Bell weights

    Returns:
        tuple: (t_x, t_y, t_z)
    """
    a, b, c, d = mixture.weights
    return (a - b + c - d, -a + b + c - d, a + b - c - d)


def eta_branch(mixture, p):
    """
    Dominant correlation coefficient after dephasing A with probability p

    Args:
        mixture (BellMixture): Bell weights before dephasing
        p (float): Damping probability

    Returns:
        tuple: (eta, axis) with axis 'x', 'y' or 'z'; ties go to 'z'
    """
    p = _check_unit('p', p)
    t_x, t_y, t_z = correlation_matrix(mixture)
    alpha, beta, gamma = abs((1 - p) * t_x), abs((1 - p) * t_y), abs(t_z)
    eta = max(alpha, beta, gamma)
    if gamma >= eta - BRANCH_TIE_TOL:
        return eta, 'z'
    return eta, 'x' if alpha >= beta else 'y'


def classical_correlation_analytic(mixture, p=0.0):
    """
    Closed-form classical correlation of a dephased Bell-diagonal state

    Args:
        mixture (BellMixture): Bell weights before dephasing
        p (float): Damping probability on A

    Returns:
        tuple: (C in bits, eta)
    """
    eta, _ = eta_branch(mixture, p)
    eta = min(eta, 1.0)
    return 1.0 - binary_entropy((1 + eta) / 2), eta


def quantum_discord(rho, optimizer=None):
    """
    Quantum correlation Q = I - C

    Bell-diagonal states use the closed form for C; anything else goes
    through the numeric optimizer.

    Args:
        rho (array-like): 4x4 density matrix
        optimizer (MeasurementOptimizer): Optimizer for the numeric path

    Returns:
        float: Q in bits
    """
    rho = validate_density_matrix(rho, dim=4)
    mixture, residual = to_mixture(rho)
    if residual <= BELL_DIAGONAL_TOL:
        classical, _ = classical_correlation_analytic(mixture)
    else:
        classical, _ = classical_correlation_numeric(rho, optimizer=optimizer)
    return mutual_information(rho) - classical


def concurrence(rho):
    """
    Wootters concurrence

    Args:
        rho (array-like): 4x4 density matrix

    Returns:
        tuple: (Lambda, Upsilon) where Upsilon = max(0, Lambda)
    """
    rho = validate_density_matrix(rho, dim=4)
    flipped = _SIGMA_YY @ rho.conj() @ _SIGMA_YY
    root = psd_sqrt(rho)
    chi = hermitian_eig(root @ flipped @ root).eigenvalues
    roots = np.sqrt(np.clip(chi, 0.0, None))
    lam = float(roots[0] - roots[1:].sum())
    return lam, max(0.0, lam)


def entanglement_of_formation(upsilon):
    """
    Entanglement of formation from the concurrence

    Args:
        upsilon (float): Concurrence in [0, 1]

    Returns:
        float: En = H((1 + sqrt(1 - Upsilon^2)) / 2) in bits
    """
    upsilon = _check_unit('Upsilon', upsilon)
    return binary_entropy((1 + math.sqrt(1 - upsilon * upsilon)) / 2)


def ree_bell_diagonal(lambda_max):
    """
    Relative entropy of entanglement of a Bell-diagonal state

    Args:
        lambda_max (float): Largest Bell weight

    Returns:
        float: 0 when lambda_max <= 1/2, else 1 - H(lambda_max)
    """
    lambda_max = _check_unit('lambda_max', lambda_max)
    if lambda_max <= 0.5:
        return 0.0
    return 1.0 - binary_entropy(lambda_max)


@dataclass(frozen=True)
class CorrelationReport:
    """All correlation quantifiers of one state"""
    i_total: float
    c_classical: float
    q_quantum: float
    eta: float
    lambda_: float
    upsilon: float
    en: float
    rn: float
    d_nonent: float
    lambda_spectrum: tuple
    direction: MeasurementDirection = None

    @property
    def rn_available(self):
        return self.rn is not None

    def to_dict(self):
        data = {
            "I": self.i_total,
            "C": self.c_classical,
            "Q": self.q_quantum,
            "eta": self.eta,
            "Lambda": self.lambda_,
            "Upsilon": self.upsilon,
            "En": self.en,
            "Rn": self.rn,
            "D": self.d_nonent,
            "lambda_spectrum": list(self.lambda_spectrum),
            "rn_available": self.rn_available,
        }
        if self.direction is not None:
            data["direction"] = {
                "theta": self.direction.theta,
                "phi": self.direction.phi,
                "bloch": [float(x) for x in bloch_direction(self.direction)],
            }
        return data

    @classmethod
    def from_dict(cls, data):
        direction = data.get("direction")
        return cls(
            i_total=data["I"],
            c_classical=data["C"],
            q_quantum=data["Q"],
            eta=data.get("eta"),
            lambda_=data["Lambda"],
            upsilon=data["Upsilon"],
            en=data["En"],
            rn=data.get("Rn"),
            d_nonent=data.get("D"),
            lambda_spectrum=tuple(data["lambda_spectrum"]),
            direction=(MeasurementDirection(direction["theta"], direction["phi"])
                       if direction else None),
        )


def full_report(rho, optimizer=None, log_level=logging.WARNING):
    """
    Compute every correlation quantifier of a state

    Args:
        rho (array-like): 4x4 density matrix
        optimizer (MeasurementOptimizer): Optimizer for non-Bell-diagonal states
        log_level (int): Level of the numeric-fallback notice

    Returns:
        CorrelationReport: Report; Rn and D are None when the state is not
            Bell-diagonal
    """
    rho = validate_density_matrix(rho, dim=4)
    spectrum = hermitian_eig(rho).eigenvalues
    total = _mutual_information(rho, spectrum_entropy(spectrum))

    mixture, residual = to_mixture(rho)
    if residual <= BELL_DIAGONAL_TOL:
        eta, axis = eta_branch(mixture, 0.0)
        classical, _ = classical_correlation_analytic(mixture)
        direction = AXIS_DIRECTIONS[axis]
        rn = ree_bell_diagonal(mixture.lambda_max)
    else:
        logger.log(log_level, f"State is not Bell-diagonal (residual {residual:.3e}); "
                   f"using numeric C and leaving Rn unavailable")
        eta = None
        classical, direction = classical_correlation_numeric(rho, optimizer=optimizer)
        rn = None

    quantum = total - classical
    lam, upsilon = concurrence(rho)
    return CorrelationReport(
        i_total=total,
        c_classical=classical,
        q_quantum=quantum,
        eta=eta,
        lambda_=lam,
        upsilon=upsilon,
        en=entanglement_of_formation(min(upsilon, 1.0)),
        rn=rn,
        d_nonent=None if rn is None else quantum - rn,
        lambda_spectrum=tuple(float(x) for x in spectrum),
        direction=direction,
    )
