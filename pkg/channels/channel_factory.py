#!/usr/bin/env python3
"""
Channel Factory Module
--------------------
Factory for creating channel instances
"""

import logging

from .base_channel import ChannelKind
from .environment_channel import EnvironmentDephasingChannel
from .phase_damping import PhaseDampingChannel

logger = logging.getLogger('correlation_dynamics.channels.factory')


class ChannelFactory:
    """Factory for creating channel instances"""

    @staticmethod
    def get_channel(kind, strength):
        """
        Get a channel instance

        Args:
            kind (ChannelKind or str): 'phase_damping' or 'environment'
            strength (ChannelStrength): Channel strength

        Returns:
            BaseChannel: Channel instance
        """
        name = kind.value if isinstance(kind, ChannelKind) else str(kind).lower()

        if name == ChannelKind.PHASE_DAMPING.value:
            logger.debug("Creating Kraus phase-damping channel")
            return PhaseDampingChannel(strength)
        elif name == ChannelKind.ENVIRONMENT.value:
            logger.debug("Creating environment-dilated dephasing channel")
            return EnvironmentDephasingChannel(strength)
        else:
            logger.warning(f"Unknown channel '{kind}', falling back to phase damping")
            return PhaseDampingChannel(strength)
