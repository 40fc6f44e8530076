"""
Tests for Poisson bootstrap error bars
"""

import logging
import math

import numpy as np
import pandas as pd
import pytest

from bootstrap import MEASURES, bootstrap_report, bootstrap_to_dict
from dephasing_channel import apply_dephasing_A
from dephasing_model import ChannelStrength
from exceptions import ValidationError
from measurement_optimizer import MeasurementOptimizer
from state_factory import interference_state
from tomography import simulate_counts


@pytest.fixture
def fast_optimizer():
    return MeasurementOptimizer({'grid_theta': 16, 'grid_phi': 8, 'refine_iters': 12})


def test_exact_counts_have_no_spread():
    result = bootstrap_report(simulate_counts(interference_state(0.75), 10000, exact=True), resamples=0)
    assert list(result.index) == MEASURES
    assert list(result.columns) == ['value', 'mean', 'std']
    assert np.all(result['std'] == 0.0)
    assert result.loc['Q', 'value'] == pytest.approx(0.188722, abs=1e-6)
    assert result.loc['I', 'mean'] == pytest.approx(1.188722, abs=1e-6)


def test_too_few_resamples():
    count_set = simulate_counts(interference_state(0.75), 10000, exact=True)
    with pytest.raises(ValidationError):
        bootstrap_report(count_set, resamples=10)


def test_spread_of_quantum_correlation(fast_optimizer):
    count_set = simulate_counts(interference_state(0.75), 10000, seed=7)
    result = bootstrap_report(count_set, resamples=200, seed=3, optimizer=fast_optimizer)
    assert 0.0 < result.loc['Q', 'std'] < 0.05
    # noisy reconstructions are not Bell-diagonal
    assert math.isnan(result.loc['Rn', 'std'])


def test_bootstrap_is_deterministic(fast_optimizer):
    count_set = simulate_counts(interference_state(0.75), 10000, seed=7)
    first = bootstrap_report(count_set, resamples=50, seed=11, optimizer=fast_optimizer)
    second = bootstrap_report(count_set, resamples=50, seed=11, optimizer=fast_optimizer)
    pd.testing.assert_frame_equal(first, second)


def test_spread_shrinks_with_counts(fast_optimizer):
    # full-rank input keeps every entropy term away from the log singularity
    rho = apply_dephasing_A(interference_state(0.75), ChannelStrength.from_kappa(0.5))
    spreads = []
    for n in (10000, 100000):
        result = bootstrap_report(simulate_counts(rho, n, seed=1), resamples=100, seed=5,
                                  optimizer=fast_optimizer)
        spreads.append(result.loc['I', 'std'])
    ratio = spreads[0] / spreads[1]
    assert math.sqrt(10) / 1.5 <= ratio <= math.sqrt(10) * 1.5


def test_bootstrap_to_dict(fast_optimizer):
    count_set = simulate_counts(interference_state(0.75), 10000, seed=2)
    data = bootstrap_to_dict(bootstrap_report(count_set, resamples=50, optimizer=fast_optimizer))
    assert set(data) == set(MEASURES)
    assert set(data['Q']) == {'value', 'mean', 'std'}
    assert data['Rn']['std'] is None
    assert isinstance(data['C']['mean'], float)


def test_resamples_log_at_debug_level(fast_optimizer, caplog):
    caplog.set_level(logging.INFO)
    count_set = simulate_counts(interference_state(0.75), 10000, seed=4)
    bootstrap_report(count_set, resamples=50, seed=1, optimizer=fast_optimizer)
    fallbacks = [r for r in caplog.records if "not Bell-diagonal" in r.getMessage()]
    reconstructions = [r for r in caplog.records if r.getMessage().startswith("Reconstructed state")]
    # the point estimate alone
    assert len(fallbacks) <= 1
    assert len(reconstructions) == 1
