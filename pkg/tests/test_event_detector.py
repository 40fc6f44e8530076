"""
Tests for landmark detection on dephasing trajectories
"""

import json
import math

import numpy as np
import pytest

from conftest import FOUR_MIX, INTERFERENCE_MIX
from dephasing_channel import dephase_mixture
from dephasing_model import ChannelStrength, DephasingModel
from dynamics_sweep import sweep
from event_detector import (
    EventMarkers, _first_direction_switch, _first_sign_loss, analytic_curves, esd_kappa,
    esd_point, events, plateaus, qc_cross_intervals, qc_gap_scan, sudden_change_kappa,
    sudden_change_point,
)
from state_factory import BellMixture, StateFamilySpec, interference_state

ESD_INTERFERENCE = 138.0 * math.sqrt(math.log2(3.0))
SC_FOUR_MIX = 138.0 * math.sqrt(math.log2(1.25))
ESD_FOUR_MIX = 138.0 * math.sqrt(math.log2(1 / 0.225))


def test_interference_landmarks(model):
    assert sudden_change_kappa(INTERFERENCE_MIX) == pytest.approx(0.5)
    assert sudden_change_point(INTERFERENCE_MIX, model) == pytest.approx(138.0, abs=1e-9)
    assert esd_kappa(INTERFERENCE_MIX) == pytest.approx(1 / 3)
    assert esd_point(INTERFERENCE_MIX, model) == pytest.approx(ESD_INTERFERENCE, abs=1e-9)
    assert esd_point(INTERFERENCE_MIX, model) == pytest.approx(173.7, abs=0.1)


def test_four_mix_landmarks(model):
    assert sudden_change_point(FOUR_MIX, model) == pytest.approx(SC_FOUR_MIX, abs=1e-9)
    assert sudden_change_point(FOUR_MIX, model) == pytest.approx(78.3, abs=0.05)
    assert esd_point(FOUR_MIX, model) == pytest.approx(ESD_FOUR_MIX, abs=1e-9)
    assert esd_point(FOUR_MIX, model) == pytest.approx(202.4, abs=0.1)


def test_absent_landmarks(model):
    # no branch switch: the fixed coefficient already dominates, or is zero
    assert sudden_change_point(BellMixture(0.0, 1.0, 0.0, 0.0), model) is None
    assert sudden_change_point(BellMixture(0.0, 0.5, 0.0, 0.5), model) is None
    # never entangled
    assert esd_point(BellMixture(0.4, 0.3, 0.2, 0.1), model) is None
    assert esd_point(BellMixture(0.25, 0.25, 0.25, 0.25), model) is None


@pytest.mark.parametrize("weights", [(0.0, 1.0, 0.0, 0.0), (0.3, 0.7, 0.0, 0.0), (0.0, 0.0, 0.2, 0.8)])
def test_entanglement_survives_full_dephasing(model, weights):
    mixture = BellMixture(*weights)
    assert esd_kappa(mixture) is None
    assert esd_point(mixture, model) is None
    # Lambda stays positive for every |kappa| > 0
    for kappa in (0.5, 1e-3, 1e-6):
        assert dephase_mixture(mixture, ChannelStrength.from_kappa(kappa)).lambda_max > 0.5


def test_events_for_state_that_never_dies(model):
    spec = StateFamilySpec('interference', b=1.0)
    markers = events(spec, model, table=sweep(spec, model, l_max=350.0, steps=36))
    assert markers.esd_L is None
    assert 'esd_L' not in markers.extrapolated
    assert "entanglement sudden death: L = absent lambda0" in markers.summary()
    data = json.loads(json.dumps(markers.to_dict(), allow_nan=False))
    assert "esd_L" not in data


def test_landmarks_follow_the_calibration():
    assert sudden_change_point(INTERFERENCE_MIX, DephasingModel(l_half=100.0)) == pytest.approx(100.0)
    lorentzian = DephasingModel(profile='lorentzian')
    assert esd_point(INTERFERENCE_MIX, lorentzian) == pytest.approx(138.0 * math.log2(3.0))


def test_analytic_curves_match_sweep(model, four_mix_spec):
    table = sweep(four_mix_spec, model, l_max=200.0, steps=9)
    curves = analytic_curves(FOUR_MIX, table.column('kappa_abs'))
    for name in ('I', 'C', 'Q'):
        assert np.allclose(curves[name].to_numpy(), table.column(name), atol=1e-9)


def test_four_mix_quantum_exceeds_classical(model, four_mix_spec):
    table = sweep(four_mix_spec, model, l_max=150.0, steps=301)
    intervals = qc_cross_intervals(table)
    assert len(intervals) == 1
    start, end = intervals[0]
    # Q == C exactly at L = 0 and the gap opens quadratically
    assert 0.0 < start < 5.0
    assert end == pytest.approx(95.5, abs=1.5)
    gap = table.column('Q') - table.column('C')
    assert gap.max() >= 0.005
    assert start < table.thickness[np.argmax(gap)] < end


def test_interference_never_has_quantum_above_classical(model, interference_spec):
    table = sweep(interference_spec, model, l_max=350.0, steps=141)
    assert qc_cross_intervals(table) == []


def test_interference_plateaus(model):
    found = plateaus(INTERFERENCE_MIX, model)
    assert found['frozen_Q'] == pytest.approx((0.0, 138.0))
    assert found['frozen_C'][0] == pytest.approx(138.0)
    assert math.isinf(found['frozen_C'][1])


def test_four_mix_plateaus(model):
    found = plateaus(FOUR_MIX, model)
    assert 'frozen_Q' not in found
    assert found['frozen_C'][0] == pytest.approx(SC_FOUR_MIX)


def test_plateaus_without_branch_switch(model):
    found = plateaus(BellMixture(0.0, 1.0, 0.0, 0.0), model)
    assert found == {'frozen_C': (0.0, math.inf)}


def test_events_from_closed_forms(model, interference_spec):
    table = sweep(interference_spec, model, l_max=350.0, steps=36)
    markers = events(interference_spec, model, table=table)
    assert markers.source == 'analytic'
    assert markers.sudden_change_L == pytest.approx(138.0, abs=0.5)
    assert markers.esd_L == pytest.approx(173.8, abs=0.5)
    assert markers.qc_cross_intervals == ()
    assert markers.extrapolated == ()
    assert set(markers.plateaus) == {'frozen_Q', 'frozen_C'}


def test_events_flag_markers_past_the_sweep(model, interference_spec):
    table = sweep(interference_spec, model, l_max=150.0, steps=7)
    markers = events(interference_spec, model, table=table)
    assert markers.extrapolated == ('esd_L',)
    assert markers.to_dict()["extrapolated"] == ['esd_L']


def test_events_for_explicit_bell_diagonal_matrix(model):
    spec = StateFamilySpec('explicit', matrix=interference_state(0.75))
    markers = events(spec, model, table=sweep(spec, model, l_max=200.0, steps=5))
    assert markers.source == 'analytic'
    assert markers.sudden_change_L == pytest.approx(138.0, abs=1e-6)


def test_events_fall_back_to_the_sweep(model, caplog):
    rho = 0.9 * interference_state(0.75)
    rho[1, 1] += 0.1
    spec = StateFamilySpec('explicit', matrix=rho)
    markers = events(spec, model, table=sweep(spec, model, l_max=300.0, steps=13))
    assert markers.source == 'sweep'
    assert markers.plateaus == {}
    assert "not Bell-diagonal" in caplog.text


def test_sweep_fallback_agrees_with_closed_forms(model, interference_spec):
    table = sweep(interference_spec, model, l_max=350.0, steps=141)
    assert _first_direction_switch(table) == pytest.approx(138.0, abs=2.5)
    assert _first_sign_loss(table.thickness, table.column('Lambda')) == pytest.approx(
        ESD_INTERFERENCE, abs=0.5
    )


def test_first_sign_loss_edge_cases():
    x = np.array([0.0, 1.0, 2.0])
    assert _first_sign_loss(x, np.array([-1.0, 1.0, 2.0])) is None
    assert _first_sign_loss(x, np.array([1.0, 0.5, 0.25])) is None
    assert _first_sign_loss(x, np.array([1.0, 0.0, -1.0])) == pytest.approx(1.0)


def test_markers_serialization():
    assert EventMarkers().to_dict() == {}
    lines = EventMarkers().summary()
    assert "sudden change: L = absent lambda0" in lines
    assert "Q > C on: none" in lines

    markers = EventMarkers(sudden_change_L=138.0, plateaus={'frozen_C': (138.0, math.inf)})
    data = markers.to_dict()
    assert data == {"sudden_change_L": 138.0, "plateaus": {"frozen_C": [138.0, None]}, "source": "analytic"}
    assert "frozen_C: [138.0, inf) lambda0" in markers.summary()


def test_qc_gap_scan(model):
    scan = qc_gap_scan(model, [0.5, 0.9], [0.5, 0.9])
    assert list(scan.columns) == ['b', 'R', 'max_gap', 'kappa_at_max', 'L_at_max',
                                  'window_start_L', 'window_end_L', 'window_width_L']
    assert len(scan) == 4
    assert np.all(np.diff(scan['max_gap'].to_numpy()) <= 0)

    best = scan[(scan['b'] == 0.9) & (scan['R'] == 0.9)].iloc[0]
    assert best['max_gap'] > 0.05
    assert best['window_end_L'] == pytest.approx(95.5, abs=1.5)
    assert best['window_start_L'] < 15.0

    flat = scan[(scan['b'] == 0.5) & (scan['R'] == 0.5)].iloc[0]
    assert flat['max_gap'] == pytest.approx(0.0, abs=1e-9)
    assert math.isnan(flat['window_start_L'])
    assert flat['window_width_L'] == 0.0


def test_qc_gap_scan_empty(model):
    assert qc_gap_scan(model, [], [0.9]).empty
