#!/usr/bin/env python3
"""
Tomography Module
---------------
Sixteen-setting two-qubit coincidence tomography: simulated counting with
Poisson noise, linear inversion and projection onto physical states
"""

from dataclasses import dataclass
import json
import logging
import math
import os

import numpy as np

from exceptions import CountsFileError, ValidationError
from linalg_core import Spectrum, hermitian_eig, reassemble, validate_density_matrix

logger = logging.getLogger('correlation_dynamics.tomography')

_SQRT_HALF = 1 / np.sqrt(2)

# Single-qubit analyzer states
ANALYZER_STATES = {
    'H': np.array([1, 0], dtype=np.complex128),
    'V': np.array([0, 1], dtype=np.complex128),
    'D': np.array([1, 1], dtype=np.complex128) * _SQRT_HALF,
    'R': np.array([1, 1j], dtype=np.complex128) * _SQRT_HALF,
    'L': np.array([1, -1j], dtype=np.complex128) * _SQRT_HALF,
}

# Canonical setting order; count files index into this list
TOMO_SETTINGS = (
    'HH', 'HV', 'VV', 'VH', 'RH', 'RV', 'DV', 'DH',
    'DR', 'DD', 'RD', 'HD', 'VD', 'VL', 'HL', 'RL',
)
FLUX_SETTINGS = ('HH', 'HV', 'VH', 'VV')

COUNT_CEILING_FACTOR = 10
PROBABILITY_TOL = 1e-10

_PAULIS = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
# sigma_j (x) sigma_k / 2, an orthonormal basis of 4x4 Hermitian operators
_OPERATOR_BASIS = np.array([np.kron(s, t) / 2 for s in _PAULIS for t in _PAULIS])


def projectors(settings=TOMO_SETTINGS):
    """
    Product projectors |s_A><s_A| (x) |s_B><s_B| for analyzer settings

    Args:
        settings (sequence): Two-letter setting names

    Returns:
        ndarray: Array of shape (len(settings), 4, 4)
    """
    result = []
    for setting in settings:
        if len(setting) != 2 or any(s not in ANALYZER_STATES for s in setting):
            raise ValidationError(f"unknown analyzer setting {setting!r}")
        ket = np.kron(ANALYZER_STATES[setting[0]], ANALYZER_STATES[setting[1]])
        result.append(np.outer(ket, ket.conj()))
    return np.array(result)


_PROJECTORS = projectors()
# B[i, m] = Tr(Pi_i Gamma_m); real because both operators are Hermitian
_INVERSION_MATRIX = np.real(np.einsum('iab,mba->im', _PROJECTORS, _OPERATOR_BASIS))


@dataclass(frozen=True)
class CountRecord:
    """Coincidences registered in one analyzer setting"""
    index: int
    setting: str
    count: float

    def to_dict(self):
        return {"i": self.index, "setting": self.setting, "count": self.count}


@dataclass(frozen=True)
class CountSet:
    """A complete set of 16 count records"""
    n: int
    records: tuple
    exact: bool = False

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise CountsFileError(f"acquisition total N must be a positive integer, got {self.n!r}")
        object.__setattr__(self, 'records', tuple(sorted(self.records, key=lambda r: r.index)))

        seen = set()
        for record in self.records:
            if not (0 <= record.index < len(TOMO_SETTINGS)):
                raise CountsFileError(f"basis index {record.index!r} out of range 0-15")
            if record.index in seen:
                raise CountsFileError(f"duplicate basis index {record.index}")
            seen.add(record.index)
            if record.setting != TOMO_SETTINGS[record.index]:
                raise CountsFileError(
                    f"basis {record.index} must be {TOMO_SETTINGS[record.index]}, got {record.setting!r}"
                )
            if not (record.count >= 0 and math.isfinite(record.count)):
                raise CountsFileError(f"count for {record.setting} must be non-negative, got {record.count!r}")
            if record.count > COUNT_CEILING_FACTOR * self.n:
                raise CountsFileError(
                    f"count {record.count} for {record.setting} exceeds {COUNT_CEILING_FACTOR} N"
                )
            if not self.exact and float(record.count) != int(record.count):
                raise CountsFileError(f"count for {record.setting} must be an integer")

        missing = set(range(len(TOMO_SETTINGS))) - seen
        if missing:
            raise CountsFileError("incomplete record set", missing=missing)

    @property
    def counts(self):
        return np.array([r.count for r in self.records], dtype=float)

    def with_counts(self, counts):
        """Same settings and N with replaced counts"""
        return CountSet(
            n=self.n,
            records=tuple(CountRecord(r.index, r.setting, int(c)) for r, c in zip(self.records, counts)),
            exact=False,
        )

    def to_dict(self):
        data = {"N": int(self.n)}
        if self.exact:
            data["exact"] = True
        data["records"] = [r.to_dict() for r in self.records]
        return data

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or not isinstance(data.get("records"), list):
            raise CountsFileError("counts JSON must be an object with 'N' and 'records'")
        exact = bool(data.get("exact", False))
        records = []
        for entry in data["records"]:
            try:
                count = entry["count"]
                if isinstance(count, bool) or not isinstance(count, (int, float)):
                    raise TypeError
                records.append(CountRecord(int(entry["i"]), str(entry["setting"]),
                                           float(count) if exact else count))
            except (KeyError, TypeError, ValueError):
                raise CountsFileError(f"malformed record {entry!r}")
        return cls(n=data.get("N"), records=tuple(records), exact=exact)


def setting_probabilities(rho):
    """Tr(Pi_i rho) for the 16 canonical settings"""
    rho = np.asarray(rho, dtype=np.complex128)
    return np.real(np.einsum('iab,ba->i', _PROJECTORS, rho))


def simulate_counts(rho, n, seed=None, exact=False):
    """
    Simulate coincidence counts for the 16 settings

    Counts are Poisson with mean N Tr(Pi_i rho), drawn from
    numpy.random.default_rng(seed) (PCG64).

    Args:
        rho (array-like): 4x4 density matrix
        n (int): Mean acquisition total per setting
        seed (int): PRNG seed
        exact (bool): Noise-free counts N Tr(Pi_i rho) instead of samples

    Returns:
        CountSet: The 16 records
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise ValidationError(f"N must be a positive integer, got {n!r}")
    rho = validate_density_matrix(rho, dim=4)
    probs = setting_probabilities(rho)
    if probs.min() < -PROBABILITY_TOL:
        raise ValidationError("negative setting probability")
    probs = np.clip(probs, 0.0, 1.0)

    if exact:
        counts = [float(c) for c in n * probs]
    else:
        rng = np.random.default_rng(seed)
        counts = [int(c) for c in rng.poisson(n * probs)]

    records = tuple(CountRecord(i, s, c) for i, (s, c) in enumerate(zip(TOMO_SETTINGS, counts)))
    return CountSet(n=int(n), records=records, exact=exact)


def flux_estimate(count_set):
    """N-hat: total counts in the four computational-basis settings"""
    return float(sum(r.count for r in count_set.records if r.setting in FLUX_SETTINGS))


def linear_inversion(count_set):
    """
    Reconstruct a state by solving Tr(Pi_i rho) = count_i / N-hat

    Args:
        count_set (CountSet): Complete record set

    Returns:
        ndarray: Hermitian unit-trace 4x4 matrix, possibly not positive
    """
    flux = flux_estimate(count_set)
    if flux <= 0:
        raise ValidationError("no coincidences in the computational-basis settings")
    frequencies = count_set.counts / flux
    coefficients = np.linalg.solve(_INVERSION_MATRIX, frequencies)
    rho = np.einsum('m,mab->ab', coefficients, _OPERATOR_BASIS)
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def simplex_projection(values):
    """
    Euclidean projection of a vector onto the probability simplex

    Args:
        values (array-like): Real vector

    Returns:
        ndarray: Non-negative vector summing to 1
    """
    v = np.asarray(values, dtype=float)
    u = np.sort(v)[::-1]
    cumulative = np.cumsum(u)
    ranks = np.arange(1, v.size + 1)
    support = np.nonzero(u - (cumulative - 1) / ranks > 0)[0][-1]
    tau = (cumulative[support] - 1) / (support + 1)
    return np.clip(v - tau, 0.0, None)


def project_physical(rho_raw):
    """
    Nearest density matrix in Frobenius norm

    Args:
        rho_raw (array-like): Hermitian unit-trace matrix

    Returns:
        ndarray: Positive semidefinite unit-trace matrix
    """
    spectrum = hermitian_eig(rho_raw)
    projected = simplex_projection(spectrum.eigenvalues)
    return reassemble(Spectrum(projected, spectrum.eigenvectors))


def reconstruct(count_set, log_level=logging.INFO):
    """
    Linear inversion followed by physical projection

    Args:
        count_set (CountSet): Complete record set
        log_level (int): Level of the reconstruction summary

    Returns:
        tuple: (raw matrix, physical matrix)
    """
    raw = linear_inversion(count_set)
    physical = project_physical(raw)
    negative = hermitian_eig(raw).eigenvalues[-1]
    logger.log(log_level, f"Reconstructed state from N-hat={flux_estimate(count_set):g} "
                          f"(smallest raw eigenvalue {negative:.3e})")
    return raw, physical


def write_counts(count_set, path):
    """
    Save a record set as counts JSON

    Args:
        count_set (CountSet): Records
        path (str): File path
    """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(count_set.to_dict(), f, indent=2)
        f.write('\n')
    logger.info(f"Saved {len(count_set.records)} count records to {path}")


def read_counts(path):
    """
    Load and validate a counts JSON file

    Args:
        path (str): File path

    Returns:
        CountSet: Complete record set
    """
    with open(path, 'r') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise CountsFileError(f"{path} is not valid JSON: {e}")
    count_set = CountSet.from_dict(data)
    logger.info(f"Loaded counts from {path} (N={count_set.n}{', exact' if count_set.exact else ''})")
    return count_set
