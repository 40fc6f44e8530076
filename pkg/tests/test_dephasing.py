"""
Tests for the thickness calibration, the dephasing map and the channel
implementations
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from channels.base_channel import ChannelKind
from channels.channel_factory import ChannelFactory
from channels.environment_channel import EnvironmentDephasingChannel
from channels.phase_damping import PhaseDampingChannel
from conftest import random_density_matrix
from correlation_measures import mutual_information
from dephasing_channel import apply_dephasing_A, dephase_mixture, evolve
from dephasing_model import (
    ChannelStrength, DephasingModel, SpectralProfile, compose_strengths,
    kappa_of_thickness, thickness_of_kappa,
)
from exceptions import ValidationError
from linalg_core import hermitian_eig
from state_factory import BellMixture, bell_state, from_mixture, to_mixture


def test_gaussian_calibration(model):
    assert kappa_of_thickness(model, 0.0).kappa_abs == 1.0
    assert kappa_of_thickness(model, 138.0).kappa_abs == pytest.approx(0.5)
    assert kappa_of_thickness(model, 276.0).kappa_abs == pytest.approx(1 / 16)
    assert kappa_of_thickness(model, 138.0).p == pytest.approx(0.5)


def test_lorentzian_calibration():
    model = DephasingModel(profile='lorentzian')
    assert model.profile is SpectralProfile.LORENTZIAN
    assert kappa_of_thickness(model, 138.0).kappa_abs == pytest.approx(0.5)
    assert kappa_of_thickness(model, 276.0).kappa_abs == pytest.approx(0.25)


def test_calibration_errors(model):
    with pytest.raises(ValidationError):
        kappa_of_thickness(model, -1.0)
    with pytest.raises(ValidationError):
        DephasingModel(l_half=0.0)
    with pytest.raises(ValidationError):
        DephasingModel(profile='cauchy')
    with pytest.raises(ValidationError):
        thickness_of_kappa(model, 1.5)


def test_thickness_of_kappa_landmarks(model):
    assert thickness_of_kappa(model, 1.0) == 0.0
    assert math.isinf(thickness_of_kappa(model, 0.0))
    assert thickness_of_kappa(model, 1 / 3) == pytest.approx(173.7, abs=0.1)
    assert thickness_of_kappa(model, 0.8) == pytest.approx(78.3, abs=0.05)


@pytest.mark.parametrize("profile", ["gaussian", "lorentzian"])
@settings(max_examples=30, deadline=None)
@given(thickness=st.floats(min_value=0.0, max_value=500.0))
def test_inverse_calibration(profile, thickness):
    model = DephasingModel(profile=profile)
    kappa = kappa_of_thickness(model, thickness).kappa_abs
    if kappa > 1e-12:
        assert thickness_of_kappa(model, kappa) == pytest.approx(thickness, abs=1e-6)


def test_strength_invariants():
    with pytest.raises(ValidationError):
        ChannelStrength(p=0.3, kappa_abs=0.3)
    with pytest.raises(ValidationError):
        ChannelStrength.from_p(1.2)
    combined = compose_strengths(ChannelStrength.from_kappa(0.5), ChannelStrength.from_kappa(0.4))
    assert combined.kappa_abs == pytest.approx(0.2)
    assert combined.p == pytest.approx(0.8)


def test_apply_dephasing_scales_a_coherences():
    rho = bell_state('phi-')
    out = apply_dephasing_A(rho, ChannelStrength.from_kappa(0.5))
    assert out[0, 3] == pytest.approx(-0.25)
    assert out[0, 0] == pytest.approx(0.5)
    assert out[3, 3] == pytest.approx(0.5)


def test_apply_dephasing_keeps_b_coherences(rng):
    rho = random_density_matrix(rng)
    out = apply_dephasing_A(rho, ChannelStrength.from_p(1.0))
    # <0b|rho|0b'> and <1b|rho|1b'> survive full dephasing
    assert np.allclose(out[:2, :2], rho[:2, :2])
    assert np.allclose(out[2:, 2:], rho[2:, 2:])
    assert np.allclose(out[:2, 2:], 0.0)


def test_apply_dephasing_rejects_bad_input():
    with pytest.raises(ValidationError):
        apply_dephasing_A(np.eye(4) / 4, 0.5)
    with pytest.raises(ValidationError):
        apply_dephasing_A(np.eye(2) / 2, ChannelStrength.from_p(0.5))


def test_dephased_interference_spectrum():
    rho = apply_dephasing_A(from_mixture(BellMixture(0, 0.75, 0, 0.25)), ChannelStrength.from_kappa(0.5))
    spectrum = hermitian_eig(rho).eigenvalues
    assert np.allclose(spectrum, [0.5625, 0.1875, 0.1875, 0.0625], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1),
       st.floats(min_value=0.0, max_value=1.0),
       st.floats(min_value=0.0, max_value=1.0))
def test_semigroup_and_physicality(seed, k1, k2):
    rho = random_density_matrix(np.random.default_rng(seed))
    s1, s2 = ChannelStrength.from_kappa(k1), ChannelStrength.from_kappa(k2)
    twice = apply_dephasing_A(apply_dephasing_A(rho, s1), s2)
    once = apply_dephasing_A(rho, compose_strengths(s1, s2))
    assert np.allclose(twice, once, atol=1e-12)
    assert np.trace(once).real == pytest.approx(1.0)
    assert hermitian_eig(once).eigenvalues[-1] >= -1e-10


def test_thick_plate_with_subnormal_coherence(rng, model):
    strength = kappa_of_thickness(model, 4420.0)
    assert 0.0 < strength.kappa_abs < np.finfo(float).tiny
    rho = random_density_matrix(rng)
    thick = apply_dephasing_A(rho, strength)
    dephased = apply_dephasing_A(rho, ChannelStrength.from_kappa(0.0))
    assert np.all(np.isfinite(hermitian_eig(thick).eigenvalues))
    assert mutual_information(thick) == pytest.approx(mutual_information(dephased), abs=1e-9)


@pytest.mark.parametrize("channel_cls", [PhaseDampingChannel, EnvironmentDephasingChannel])
@pytest.mark.parametrize("p", [0.0, 0.3, 0.75, 1.0])
def test_channels_match_closed_form(rng, channel_cls, p):
    strength = ChannelStrength.from_p(p)
    channel = channel_cls(strength)
    assert channel.is_cptp()
    rho = random_density_matrix(rng)
    assert np.allclose(channel.apply(rho), apply_dephasing_A(rho, strength), atol=1e-12)


def test_channel_factory(caplog):
    strength = ChannelStrength.from_p(0.4)
    assert isinstance(ChannelFactory.get_channel('environment', strength), EnvironmentDephasingChannel)
    assert isinstance(ChannelFactory.get_channel(ChannelKind.PHASE_DAMPING, strength), PhaseDampingChannel)
    fallback = ChannelFactory.get_channel('amplitude', strength)
    assert isinstance(fallback, PhaseDampingChannel)
    assert "falling back" in caplog.text


def test_evolve_with_channels(model, interference_spec):
    closed = evolve(interference_spec, model, 100.0)
    for kind in ('phase_damping', 'environment'):
        assert np.allclose(evolve(interference_spec, model, 100.0, channel=kind), closed, atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=4, max_size=4).filter(lambda w: sum(w) > 0.1),
       st.floats(min_value=0.0, max_value=1.0))
def test_dephase_mixture_matches_matrix(w, kappa):
    total = sum(w)
    mixture = BellMixture(*(x / total for x in w))
    strength = ChannelStrength.from_kappa(kappa)
    expected, residual = to_mixture(apply_dephasing_A(from_mixture(mixture), strength))
    assert residual < 1e-10
    assert np.allclose(dephase_mixture(mixture, strength).weights, expected.weights, atol=1e-10)
