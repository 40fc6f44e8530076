#!/usr/bin/env python3
"""
Base Channel Module
-----------------
Defines the interface for channels acting on qubit A
"""

from abc import ABC, abstractmethod
from enum import Enum
import logging

import numpy as np

logger = logging.getLogger('correlation_dynamics.channels')

KRAUS_COMPLETENESS_TOL = 1e-13


class ChannelKind(Enum):
    """Available channel implementations"""
    PHASE_DAMPING = "phase_damping"
    ENVIRONMENT = "environment"


class BaseChannel(ABC):
    """Base class for single-qubit channels applied to subsystem A"""

    def __init__(self, strength):
        """
        Initialize the channel

        Args:
            strength (ChannelStrength): Damping probability and coherence factor
        """
        self.strength = strength
        self.initialize_operators()

    @abstractmethod
    def initialize_operators(self):
        """Build the operators that define the channel"""
        pass

    @abstractmethod
    def kraus_operators(self):
        """
        Kraus operators on qubit A

        Returns:
            list: 2x2 complex matrices K_i with sum K_i^dagger K_i = I
        """
        pass

    def apply(self, rho):
        """
        Apply (E (x) id) to a two-qubit state

        Args:
            rho (ndarray): 4x4 density matrix

        Returns:
            ndarray: 4x4 output state
        """
        identity = np.eye(2, dtype=np.complex128)
        out = np.zeros((4, 4), dtype=np.complex128)
        for k in self.kraus_operators():
            lifted = np.kron(k, identity)
            out += lifted @ rho @ lifted.conj().T
        return out

    def completeness_error(self):
        """Largest elementwise deviation of sum K^dagger K from the identity"""
        total = sum(k.conj().T @ k for k in self.kraus_operators())
        return float(np.max(np.abs(total - np.eye(2))))

    def is_cptp(self, tol=KRAUS_COMPLETENESS_TOL):
        """Check the Kraus completeness relation"""
        return self.completeness_error() <= tol
