#!/usr/bin/env python3
"""
Environment Dephasing Channel Module
----------------------------------
Phase damping built from its system-environment dilation: qubit A scatters a
three-level environment out of |0>_E with probability p, into |1>_E when A
is in |0> and into |2>_E when A is in |1>; the environment is then traced out
"""

import logging

import numpy as np

from .base_channel import BaseChannel

logger = logging.getLogger('correlation_dynamics.channels.environment')

ENV_DIM = 3


class EnvironmentDephasingChannel(BaseChannel):
    """Dephasing of qubit A through an explicit isometry A -> A (x) E"""

    def initialize_operators(self):
        p = self.strength.p
        # rows indexed (s, e) -> s * ENV_DIM + e, columns by the input state s
        w = np.zeros((2 * ENV_DIM, 2), dtype=np.complex128)
        w[0 * ENV_DIM + 0, 0] = np.sqrt(1.0 - p)
        w[0 * ENV_DIM + 1, 0] = np.sqrt(p)
        w[1 * ENV_DIM + 0, 1] = np.sqrt(1.0 - p)
        w[1 * ENV_DIM + 2, 1] = np.sqrt(p)
        self.isometry = w

    def kraus_operators(self):
        w = self.isometry.reshape(2, ENV_DIM, 2)
        return [w[:, e, :].copy() for e in range(ENV_DIM)]

    def apply(self, rho):
        lifted = np.kron(self.isometry, np.eye(2, dtype=np.complex128))
        joint = lifted @ rho @ lifted.conj().T
        joint = joint.reshape(2, ENV_DIM, 2, 2, ENV_DIM, 2)
        return np.einsum('iejkel->ijkl', joint).reshape(4, 4)
