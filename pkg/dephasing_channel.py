#!/usr/bin/env python3
"""
Dephasing Channel Module
----------------------
One-sided phase damping on qubit A and evolution of input states through
a quartz plate of given thickness
"""

import logging

import numpy as np

from channels.channel_factory import ChannelFactory
from dephasing_model import ChannelStrength, kappa_of_thickness
from exceptions import ValidationError
from linalg_core import as_matrix
from state_factory import BellMixture

logger = logging.getLogger('correlation_dynamics.dephasing_channel')


def _coherence_mask(kappa_abs):
    # indices [i, j, k, l] of <ij|rho|kl>; A-coherences have i != k
    mask = np.ones((2, 2, 2, 2))
    mask[0, :, 1, :] = kappa_abs
    mask[1, :, 0, :] = kappa_abs
    return mask.reshape(4, 4)


def apply_dephasing_A(rho, strength):
    """
    Apply phase damping to qubit A

    Every element <ij|rho|kl> with i != k is multiplied by |kappa| = 1 - p;
    populations and B-only coherences are unchanged.

    Args:
        rho (array-like): 4x4 density matrix
        strength (ChannelStrength): Channel strength

    Returns:
        ndarray: Dephased 4x4 state
    """
    if not isinstance(strength, ChannelStrength):
        raise ValidationError(f"expected a ChannelStrength, got {type(strength).__name__}")
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValidationError(f"apply_dephasing_A expects a 4x4 matrix, got {rho.shape}")
    return rho * _coherence_mask(strength.kappa_abs)


def evolve(spec, model, thickness, channel=None):
    """
    Prepare an input state and pass qubit A through the quartz plate

    Args:
        spec (StateFamilySpec): Input state
        model (DephasingModel): Thickness calibration
        thickness (float): L in units of the central wavelength
        channel (ChannelKind or str): Channel implementation to use instead of
            the closed elementwise form, e.g. 'environment'

    Returns:
        ndarray: Evolved 4x4 state
    """
    strength = kappa_of_thickness(model, thickness)
    rho = spec.build()
    if channel is None:
        return apply_dephasing_A(rho, strength)
    return ChannelFactory.get_channel(channel, strength).apply(rho)


def dephase_mixture(mixture, strength):
    """
    Bell weights after dephasing A

    Phase damping on A only mixes |Phi+> with |Phi-> and |Psi+> with |Psi->:
    each pair keeps its sum while its difference shrinks by |kappa|.

    Args:
        mixture (BellMixture): Weights before the channel
        strength (ChannelStrength): Channel strength

    Returns:
        BellMixture: Weights after the channel
    """
    a, b, c, d = mixture.weights
    k = strength.kappa_abs
    return BellMixture(
        (a + b) / 2 + k * (a - b) / 2,
        (a + b) / 2 - k * (a - b) / 2,
        (c + d) / 2 + k * (c - d) / 2,
        (c + d) / 2 - k * (c - d) / 2,
    )
