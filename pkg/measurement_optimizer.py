#!/usr/bin/env python3
"""
Measurement Optimizer Module
--------------------------
Minimizes the conditional entropy of A over projective measurements
|l> = cos(theta)|0> + sin(theta) e^(i phi)|1> on B: coarse grid, then
per-coordinate golden-section refinement
"""

from dataclasses import dataclass
import logging
import math

import numpy as np

from exceptions import ValidationError
from linalg_core import entropy_terms, hermitian_eigvals_2x2

logger = logging.getLogger('correlation_dynamics.measurement_optimizer')

PROBABILITY_TOL = 1e-10
INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQ = (3 - math.sqrt(5)) / 2


@dataclass(frozen=True)
class MeasurementDirection:
    """Projective measurement direction on qubit B"""
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValidationError(f"theta must lie in [0, pi], got {self.theta!r}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise ValidationError(f"phi must lie in [0, 2 pi), got {self.phi!r}")

    @classmethod
    def from_degrees(cls, theta_deg, phi_deg=0.0):
        return cls(math.radians(theta_deg), math.radians(phi_deg) % (2 * math.pi))

    @property
    def theta_deg(self):
        return math.degrees(self.theta)

    def ket(self):
        return np.array([math.cos(self.theta), math.sin(self.theta) * np.exp(1j * self.phi)])

    def projector(self):
        ket = self.ket()
        return np.outer(ket, ket.conj())

    def orthogonal(self):
        """Direction of the complementary outcome |l_perp>"""
        if self.theta <= math.pi / 2:
            return MeasurementDirection(math.pi / 2 - self.theta, (self.phi + math.pi) % (2 * math.pi))
        return MeasurementDirection(self.theta - math.pi / 2, self.phi)

    def bloch_vector(self):
        """Unit Bloch vector (sin 2theta cos phi, sin 2theta sin phi, cos 2theta)"""
        s = math.sin(2 * self.theta)
        return np.array([s * math.cos(self.phi), s * math.sin(self.phi), math.cos(2 * self.theta)])


def _kets(thetas, phis):
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    cos_t, sin_t, phase = np.cos(thetas), np.sin(thetas), np.exp(1j * phis)
    ket = np.stack([cos_t + 0j, sin_t * phase], axis=-1)
    perp = np.stack([sin_t + 0j, -cos_t * phase], axis=-1)
    return ket, perp


def _conditional_block(rho, kets):
    """Unnormalized <l|_B rho |l>_B on A for a stack of kets"""
    blocks = np.asarray(rho, dtype=np.complex128).reshape(2, 2, 2, 2)
    return np.einsum('...b,abcd,...d->...ac', kets.conj(), blocks, kets)


def _weighted_entropy(block):
    """q S(block / q) and q for a stack of unnormalized 2x2 blocks"""
    q = np.real(np.trace(block, axis1=-2, axis2=-1))
    if np.any(q < -PROBABILITY_TOL) or np.any(q > 1 + PROBABILITY_TOL):
        raise ValidationError("measurement outcome probability outside [0, 1]")
    q = np.clip(q, 0.0, 1.0)
    mu = np.clip(hermitian_eigvals_2x2(block), 0.0, None)
    weighted = np.sum(entropy_terms(mu), axis=-1) - entropy_terms(q)
    return np.clip(weighted, 0.0, None), q


def conditional_entropies(rho, thetas, phis, single_outcome=False):
    """
    Conditional entropy of A after measuring B, vectorized over directions

    Args:
        rho (ndarray): 4x4 density matrix
        thetas (array-like): Polar angles, broadcastable against phis
        phis (array-like): Azimuthal angles
        single_outcome (bool): Return S(rho_A^l) of the |l> outcome only
            instead of q S(rho_A^l) + (1 - q) S(rho_A^l_perp)

    Returns:
        ndarray: Entropies in bits, shaped like the broadcast angles
    """
    ket, perp = _kets(*np.broadcast_arrays(thetas, phis))
    weighted, q = _weighted_entropy(_conditional_block(rho, ket))
    if single_outcome:
        # outcomes with round-off probability are impossible, not normalizable
        possible = q > PROBABILITY_TOL
        return np.where(possible, weighted / np.where(possible, q, 1.0), np.nan)
    weighted_perp, _ = _weighted_entropy(_conditional_block(rho, perp))
    return weighted + weighted_perp


def golden_section_minimize(objective, a, b, iterations):
    """
    Golden-section search for a minimum of a unimodal function on [a, b]

    Args:
        objective (callable): Scalar function
        a (float): Lower end of the bracket
        b (float): Upper end of the bracket
        iterations (int): Number of bracket reductions

    Returns:
        tuple: (x, objective(x)) at the best interior point found
    """
    dist = b - a
    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc, yd = objective(c), objective(d)

    for _ in range(iterations):
        if yc < yd:
            b, d, yd = d, c, yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = objective(c)
        else:
            a, c, yc = c, d, yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = objective(d)

    return (c, yc) if yc < yd else (d, yd)


class MeasurementOptimizer:
    """Finds the measurement on B that minimizes the conditional entropy of A"""

    def __init__(self, config=None):
        """
        Initialize the optimizer

        Args:
            config (dict): Configuration parameters
        """
        self.config = dict(config or {})

        # Default configuration
        self.default_config = {
            'grid_theta': 64,       # intervals over theta in [0, pi/2]
            'grid_phi': 32,         # points over phi in [0, 2 pi)
            'refine_iters': 40,     # golden-section reductions per coordinate
            'refine_rounds': 2,     # theta-then-phi refinement passes
            'single_outcome': False
        }

        for key, value in self.default_config.items():
            self.config.setdefault(key, value)

        for key in ('grid_theta', 'grid_phi'):
            if int(self.config[key]) < 8:
                raise ValidationError(f"{key} must be at least 8, got {self.config[key]}")
        if int(self.config['refine_iters']) < 0:
            raise ValidationError("refine_iters must be non-negative")

    def minimize(self, rho):
        """
        Minimize the conditional entropy over measurement directions

        The polar angle is scanned on [0, pi/2]: theta and pi - theta with phi
        shifted by pi give the same projector, so this covers every direction.
        Ties keep the first grid point (smallest theta, then smallest phi).

        Args:
            rho (ndarray): 4x4 density matrix

        Returns:
            tuple: (minimal conditional entropy, MeasurementDirection)
        """
        n_theta = int(self.config['grid_theta'])
        n_phi = int(self.config['grid_phi'])
        iters = int(self.config['refine_iters'])
        single = bool(self.config['single_outcome'])

        thetas = np.linspace(0.0, math.pi / 2, n_theta + 1)
        phis = np.arange(n_phi) * (2 * math.pi / n_phi)
        grid = conditional_entropies(rho, thetas[:, None], phis[None, :], single_outcome=single)
        i, j = np.unravel_index(np.nanargmin(grid), grid.shape)
        best_theta, best_phi, best_value = thetas[i], phis[j], grid[i, j]

        def value(theta, phi):
            return float(conditional_entropies(rho, theta, phi, single_outcome=single))

        if iters > 0:
            h_theta, h_phi = thetas[1] - thetas[0], phis[1] - phis[0]
            for _ in range(int(self.config['refine_rounds'])):
                lo, hi = max(0.0, best_theta - h_theta), min(math.pi / 2, best_theta + h_theta)
                theta, val = golden_section_minimize(lambda t: value(t, best_phi), lo, hi, iters)
                if val < best_value:
                    best_theta, best_value = theta, val
                phi, val = golden_section_minimize(
                    lambda f: value(best_theta, f), best_phi - h_phi, best_phi + h_phi, iters
                )
                if val < best_value:
                    best_phi, best_value = phi % (2 * math.pi), val

        direction = MeasurementDirection(float(best_theta), float(best_phi) % (2 * math.pi))
        logger.debug(f"Minimal conditional entropy {best_value:.9f} at theta={direction.theta_deg:.3f} deg")
        return float(best_value), direction
