#!/usr/bin/env python3
"""
Phase Damping Channel Module
--------------------------
Kraus form of the phase-damping map after tracing out the environment
"""

import logging

import numpy as np

from .base_channel import BaseChannel

logger = logging.getLogger('correlation_dynamics.channels.phase_damping')


class PhaseDampingChannel(BaseChannel):
    """Kraus set {sqrt(1-p) I, sqrt(p) |0><0|, sqrt(p) |1><1|} on qubit A"""

    def initialize_operators(self):
        p = self.strength.p
        self._kraus = [
            np.sqrt(1.0 - p) * np.eye(2, dtype=np.complex128),
            np.sqrt(p) * np.array([[1, 0], [0, 0]], dtype=np.complex128),
            np.sqrt(p) * np.array([[0, 0], [0, 1]], dtype=np.complex128),
        ]

    def kraus_operators(self):
        return [k.copy() for k in self._kraus]
