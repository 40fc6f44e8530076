"""
Tests for simulated counting, reconstruction and counts files
"""

import json

import numpy as np
import pytest

from conftest import random_density_matrix, random_mixture
from exceptions import CountsFileError, ValidationError
from linalg_core import Spectrum, hermitian_eig, reassemble, trace_distance
from state_factory import bell_state, from_mixture, interference_state
from tomography import (
    TOMO_SETTINGS, CountRecord, CountSet, _INVERSION_MATRIX, flux_estimate, linear_inversion,
    project_physical, projectors, read_counts, reconstruct, setting_probabilities,
    simplex_projection, simulate_counts, write_counts,
)


def _basis_state(index):
    rho = np.zeros((4, 4), dtype=complex)
    rho[index, index] = 1.0
    return rho


def test_projector_examples():
    hh, dr = projectors(['HH', 'DR'])
    assert np.allclose(hh, _basis_state(0))
    assert np.trace(dr).real == pytest.approx(1.0)
    assert np.allclose(dr @ dr, dr)
    with pytest.raises(ValidationError):
        projectors(['HX'])


def test_settings_are_informationally_complete():
    assert len(TOMO_SETTINGS) == 16
    assert np.linalg.matrix_rank(_INVERSION_MATRIX) == 16


def test_probabilities_of_product_state():
    probs = dict(zip(TOMO_SETTINGS, setting_probabilities(_basis_state(0))))
    assert probs['HH'] == pytest.approx(1.0)
    assert probs['HV'] == pytest.approx(0.0)
    assert probs['VV'] == pytest.approx(0.0)
    assert probs['RH'] == pytest.approx(0.5)
    assert probs['DD'] == pytest.approx(0.25)


def test_exact_counts():
    count_set = simulate_counts(_basis_state(0), 1000, exact=True)
    assert count_set.exact
    assert count_set.records[0] == CountRecord(0, 'HH', 1000.0)
    assert flux_estimate(count_set) == pytest.approx(1000.0)
    assert count_set.to_dict()["exact"] is True


def test_poisson_counts_are_seeded():
    first = simulate_counts(bell_state('phi+'), 1000, seed=5)
    second = simulate_counts(bell_state('phi+'), 1000, seed=5)
    assert first == second
    assert all(isinstance(r.count, int) for r in first.records)
    assert "exact" not in first.to_dict()


def test_poisson_mean_of_diagonal_setting():
    rho = bell_state('phi+')
    dd = TOMO_SETTINGS.index('DD')
    values = [simulate_counts(rho, 1000, seed=s).counts[dd] / 1000 for s in range(1000)]
    # sigma of a single draw is sqrt(0.5 / 1000)
    assert np.mean(values) == pytest.approx(0.5, abs=3 * np.sqrt(0.5 / 1000) / np.sqrt(1000))


def test_simulate_counts_validation():
    with pytest.raises(ValidationError):
        simulate_counts(bell_state('phi+'), 0)
    with pytest.raises(ValidationError):
        simulate_counts(np.eye(4), 100)


def test_noiseless_round_trip():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        rho = random_density_matrix(rng)
        _, physical = reconstruct(simulate_counts(rho, 10000, exact=True))
        worst = max(worst, trace_distance(physical, rho))
    assert worst <= 1e-9


def test_linear_inversion_is_unit_trace_and_hermitian(rng):
    raw = linear_inversion(simulate_counts(random_density_matrix(rng), 10000, seed=3))
    assert np.trace(raw).real == pytest.approx(1.0)
    assert np.allclose(raw, raw.conj().T)


@pytest.mark.parametrize("n,bound", [(10000, 0.035), (100000, 0.012)])
def test_noisy_reconstruction_accuracy(n, bound):
    rng = np.random.default_rng(99)
    distances = []
    for trial in range(100):
        truth = from_mixture(random_mixture(rng))
        _, physical = reconstruct(simulate_counts(truth, n, seed=trial))
        distances.append(trace_distance(physical, truth))
    assert np.median(distances) <= bound


def test_reconstruction_is_consistent_with_the_counts():
    count_set = simulate_counts(interference_state(0.75), 10000, seed=21)
    _, physical = reconstruct(count_set)
    expected = flux_estimate(count_set) * setting_probabilities(physical)
    observed = count_set.counts
    sigma = np.sqrt(np.maximum(observed, 1.0))
    assert np.sum(np.abs(expected - observed) <= 3 * sigma) >= 14


def test_simplex_projection_example():
    assert simplex_projection([1.1, 0.2, -0.1, -0.2]) == pytest.approx([0.95, 0.05, 0.0, 0.0])
    point = np.array([0.4, 0.3, 0.2, 0.1])
    assert simplex_projection(point) == pytest.approx(point)


def test_project_physical(rng):
    vectors = hermitian_eig(random_density_matrix(rng)).eigenvectors
    raw = reassemble(Spectrum(np.array([1.1, 0.2, -0.1, -0.2]), vectors))
    physical = project_physical(raw)
    assert hermitian_eig(physical).eigenvalues == pytest.approx([0.95, 0.05, 0.0, 0.0], abs=1e-10)
    assert np.allclose(project_physical(physical), physical, atol=1e-10)


def test_counts_file_round_trip(tmp_path):
    count_set = simulate_counts(interference_state(0.75), 10000, seed=42)
    path = tmp_path / "counts" / "c.json"
    write_counts(count_set, str(path))
    assert read_counts(str(path)) == count_set
    data = json.loads(path.read_text())
    assert data["records"][9] == {"i": 9, "setting": "DD", "count": count_set.records[9].count}


def test_incomplete_counts_file(tmp_path):
    data = simulate_counts(bell_state('phi+'), 1000, seed=1).to_dict()
    data["records"] = [r for r in data["records"] if r["i"] not in (3, 7)]
    path = tmp_path / "missing.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CountsFileError) as excinfo:
        read_counts(str(path))
    assert excinfo.value.missing == [3, 7]
    assert "missing basis indices" in str(excinfo.value)


@pytest.mark.parametrize("mutate", [
    lambda d: d["records"].append(dict(d["records"][0])),
    lambda d: d["records"][2].update(setting="HV"),
    lambda d: d["records"][0].update(count=-1),
    lambda d: d["records"][0].update(count=1.5),
    lambda d: d["records"][0].update(count=10 ** 9),
    lambda d: d["records"][0].update(i=16),
    lambda d: d["records"][0].pop("count"),
    lambda d: d.update(N=0),
])
def test_invalid_counts_files(tmp_path, mutate):
    data = simulate_counts(bell_state('phi+'), 1000, seed=1).to_dict()
    mutate(data)
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CountsFileError):
        read_counts(str(path))


def test_counts_file_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("counts: 12")
    with pytest.raises(CountsFileError):
        read_counts(str(path))


def test_zero_flux_is_rejected():
    records = tuple(CountRecord(i, s, 0 if i < 4 else 10) for i, s in enumerate(TOMO_SETTINGS))
    with pytest.raises(ValidationError):
        linear_inversion(CountSet(n=100, records=records))
