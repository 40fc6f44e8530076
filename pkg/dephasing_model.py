#!/usr/bin/env python3
"""
Dephasing Model Module
--------------------
Calibration from quartz thickness L (in units of the central wavelength)
to the decoherence parameter |kappa| and the damping probability p = 1 - |kappa|
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
import logging
import math

from exceptions import ValidationError

logger = logging.getLogger('correlation_dynamics.dephasing_model')

DEFAULT_L_HALF = 138.0
STRENGTH_TOL = 1e-12


class SpectralProfile(Enum):
    """Shape of the photon frequency distribution"""
    GAUSSIAN = "gaussian"
    LORENTZIAN = "lorentzian"


class BaseSpectralProfile(ABC):
    """Overlap decay |kappa| as a function of x = L / L_half"""

    @abstractmethod
    def decay(self, x):
        """
        Coherence factor at reduced thickness x

        Args:
            x (float): L / L_half, non-negative

        Returns:
            float: |kappa| in [0, 1] with decay(0) = 1 and decay(1) = 1/2
        """
        pass

    @abstractmethod
    def inverse(self, kappa_abs):
        """
        Reduced thickness at which the coherence factor equals kappa_abs

        Args:
            kappa_abs (float): |kappa| in (0, 1]

        Returns:
            float: x = L / L_half
        """
        pass


class GaussianProfile(BaseSpectralProfile):
    """Gaussian spectrum: Gaussian-in-delay overlap, |kappa| = 2^(-x^2)"""

    def decay(self, x):
        return 2.0 ** (-(x * x))

    def inverse(self, kappa_abs):
        return math.sqrt(math.log2(1.0 / kappa_abs))


class LorentzianProfile(BaseSpectralProfile):
    """Lorentzian spectrum: exponential overlap, |kappa| = 2^(-x), i.e. p = 1 - exp(-Gamma t)"""

    def decay(self, x):
        return 2.0 ** (-x)

    def inverse(self, kappa_abs):
        return math.log2(1.0 / kappa_abs)


_PROFILES = {
    SpectralProfile.GAUSSIAN: GaussianProfile(),
    SpectralProfile.LORENTZIAN: LorentzianProfile(),
}


@dataclass(frozen=True)
class ChannelStrength:
    """Damping probability p and coherence factor |kappa|, with p + |kappa| = 1"""
    p: float
    kappa_abs: float

    def __post_init__(self):
        for name in ('p', 'kappa_abs'):
            value = getattr(self, name)
            if value is None or not (-STRENGTH_TOL <= value <= 1 + STRENGTH_TOL):
                raise ValidationError(f"{name} must lie in [0, 1], got {value!r}")
            object.__setattr__(self, name, min(max(float(value), 0.0), 1.0))
        if abs(self.p + self.kappa_abs - 1.0) > STRENGTH_TOL:
            raise ValidationError(f"p + |kappa| must equal 1, got {self.p + self.kappa_abs:.15f}")

    @classmethod
    def from_kappa(cls, kappa_abs):
        return cls(p=1.0 - kappa_abs, kappa_abs=kappa_abs)

    @classmethod
    def from_p(cls, p):
        return cls(p=p, kappa_abs=1.0 - p)


@dataclass(frozen=True)
class DephasingModel:
    """Thickness calibration anchored at L_half, where |kappa| = 1/2"""
    l_half: float = DEFAULT_L_HALF
    profile: SpectralProfile = SpectralProfile.GAUSSIAN

    def __post_init__(self):
        try:
            object.__setattr__(self, 'profile', SpectralProfile(self.profile))
        except ValueError:
            raise ValidationError(f"unknown spectral profile {self.profile!r}")
        if self.l_half is None or not (self.l_half > 0 and math.isfinite(self.l_half)):
            raise ValidationError(f"l_half must be a positive number, got {self.l_half!r}")
        object.__setattr__(self, 'l_half', float(self.l_half))

    def kappa_of_thickness(self, thickness):
        return kappa_of_thickness(self, thickness)

    def thickness_of_kappa(self, kappa_abs):
        return thickness_of_kappa(self, kappa_abs)

    def to_dict(self):
        return {"profile": self.profile.value, "l_half_lambda0": self.l_half}

    @classmethod
    def from_dict(cls, data):
        return cls(
            l_half=data.get("l_half_lambda0", DEFAULT_L_HALF),
            profile=data.get("profile", SpectralProfile.GAUSSIAN.value),
        )


def kappa_of_thickness(model, thickness):
    """
    Channel strength after a quartz plate of the given thickness

    Args:
        model (DephasingModel): Calibration
        thickness (float): L in units of the central wavelength, L >= 0

    Returns:
        ChannelStrength: |kappa(L)| and p = 1 - |kappa(L)|
    """
    if thickness is None or not thickness >= 0:
        raise ValidationError(f"thickness must be non-negative, got {thickness!r}")
    kappa_abs = _PROFILES[model.profile].decay(thickness / model.l_half)
    return ChannelStrength.from_kappa(kappa_abs)


def thickness_of_kappa(model, kappa_abs):
    """
    Invert the calibration

    Args:
        model (DephasingModel): Calibration
        kappa_abs (float): |kappa| in [0, 1]

    Returns:
        float: L in units of the central wavelength (inf when |kappa| = 0)
    """
    if kappa_abs is None or not (0.0 <= kappa_abs <= 1.0):
        raise ValidationError(f"|kappa| must lie in [0, 1], got {kappa_abs!r}")
    if kappa_abs == 0.0:
        return math.inf
    if kappa_abs == 1.0:
        return 0.0
    return model.l_half * _PROFILES[model.profile].inverse(kappa_abs)


def compose_strengths(first, second):
    """Two successive dephasing stages act as one with |kappa| = |kappa_1| |kappa_2|"""
    return ChannelStrength.from_kappa(first.kappa_abs * second.kappa_abs)
