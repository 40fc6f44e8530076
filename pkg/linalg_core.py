#!/usr/bin/env python3
"""
Linear Algebra Core Module
------------------------
Dense complex linear algebra for small Hermitian problems: tensor products,
partial traces, a cyclic Jacobi eigensolver and entropy functionals.

All matrices are numpy complex128 arrays. Qubit ordering is A (x) B over
the canonical basis {|HH>, |HV>, |VH>, |VV>}.
"""

from collections import namedtuple
from enum import Enum
import logging

import numpy as np

from exceptions import ValidationError, ConvergenceError

logger = logging.getLogger('correlation_dynamics.linalg')

HERMITIAN_TOL = 1e-10
OFF_DIAGONAL_TOL = 1e-13
MAX_JACOBI_SWEEPS = 50
ENTROPY_NEGATIVE_TOL = 1e-9
TINY = np.finfo(float).tiny

Spectrum = namedtuple('Spectrum', ['eigenvalues', 'eigenvectors'])


class Subsystem(Enum):
    """Subsystem tags of a two-qubit state"""
    A = "A"
    B = "B"


def as_matrix(m):
    """
    Coerce a value into a square complex128 matrix

    Args:
        m (array-like): Square matrix

    Returns:
        ndarray: Complex copy of the input
    """
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {arr.shape}")
    return arr


def hermiticity_error(m):
    """Largest elementwise deviation |M - M^dagger|"""
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, tol=HERMITIAN_TOL):
    """Check Hermiticity elementwise within tol"""
    return hermiticity_error(m) <= tol


def dagger(m):
    """Conjugate transpose"""
    return np.conj(np.asarray(m)).T


def tensor(a, b):
    """
    Kronecker product with the first factor as subsystem A

    Entry (i*dim_b + k, j*dim_b + l) equals a[i, j] * b[k, l].

    Args:
        a (array-like): Square matrix of subsystem A
        b (array-like): Square matrix of subsystem B

    Returns:
        ndarray: Matrix of dimension dim_a * dim_b
    """
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(rho, keep=Subsystem.A):
    """
    Reduce a two-qubit operator to one qubit

    Args:
        rho (array-like): 4x4 operator
        keep (Subsystem or str): Subsystem to keep ('A' or 'B')

    Returns:
        ndarray: 2x2 reduced operator
    """
    rho = as_matrix(rho)
    if rho.shape != (4, 4):
        raise ValidationError(f"partial_trace expects a 4x4 matrix, got {rho.shape}")
    keep = Subsystem(keep.value if isinstance(keep, Subsystem) else str(keep).upper())

    blocks = rho.reshape(2, 2, 2, 2)  # [a, b, a', b']
    if keep is Subsystem.A:
        return np.einsum('ijkj->ik', blocks)
    return np.einsum('jijk->ik', blocks)


def _off_diagonal_norm(a):
    mask = ~np.eye(a.shape[0], dtype=bool)
    return float(np.sqrt(np.sum(np.abs(a[mask]) ** 2)))


def hermitian_eig(m, tol=HERMITIAN_TOL, max_sweeps=MAX_JACOBI_SWEEPS):
    """
    Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations

    Each rotation first removes the phase of a[p, q] with a diagonal unitary,
    then applies a real Givens rotation that zeroes the (p, q) entry.
    Sweeps repeat until the off-diagonal Frobenius norm drops below
    1e-13 (relative to the matrix norm when that exceeds 1).

    Args:
        m (array-like): Hermitian matrix
        tol (float): Hermiticity tolerance of the input
        max_sweeps (int): Sweep budget

    Returns:
        Spectrum: Eigenvalues sorted descending and matching eigenvector columns
    """
    a = as_matrix(m)
    if not np.all(np.isfinite(a)):
        raise ValidationError("hermitian_eig called on a matrix with non-finite entries")
    if hermiticity_error(a) > tol:
        raise ValidationError("hermitian_eig called on a non-Hermitian matrix")
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = OFF_DIAGONAL_TOL * max(1.0, float(np.linalg.norm(a)))

    sweeps = 0
    while _off_diagonal_norm(a) > threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal norm {_off_diagonal_norm(a):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                # subnormal entries overflow 1/r and are already far below threshold
                if r < TINY:
                    continue
                phase = np.exp(1j * np.angle(apq))
                theta = 0.5 * np.arctan2(2.0 * r, (a[p, p] - a[q, q]).real)
                c, s = np.cos(theta), np.sin(theta)

                u = np.eye(n, dtype=np.complex128)
                u[p, p] = c
                u[p, q] = -s
                u[q, p] = s * np.conj(phase)
                u[q, q] = c * np.conj(phase)

                a = u.conj().T @ a @ u
                v = v @ u
        sweeps += 1

    eigenvalues = np.real(np.diag(a)).copy()
    if not np.all(np.isfinite(eigenvalues)):
        raise ConvergenceError("Jacobi eigensolver produced non-finite eigenvalues")
    order = np.argsort(-eigenvalues, kind='stable')
    return Spectrum(eigenvalues[order], v[:, order])


def hermitian_eigvals_2x2(m):
    """
    Eigenvalues of (a stack of) 2x2 Hermitian matrices, descending

    A single Jacobi rotation diagonalizes a 2x2 block exactly; this is the
    closed form of that rotation, vectorized over leading axes.

    Args:
        m (ndarray): Array of shape (..., 2, 2)

    Returns:
        ndarray: Array of shape (..., 2)
    """
    m = np.asarray(m)
    a = m[..., 0, 0].real
    d = m[..., 1, 1].real
    b = m[..., 0, 1]
    mean = (a + d) / 2
    radius = np.sqrt(((a - d) / 2) ** 2 + np.abs(b) ** 2)
    return np.stack([mean + radius, mean - radius], axis=-1)


def entropy_terms(values):
    """Elementwise -x log2 x with 0 log 0 = 0"""
    values = np.asarray(values, dtype=float)
    positive = values > 0
    safe = np.where(positive, values, 1.0)
    return np.where(positive, -values * np.log2(safe), 0.0)


def spectrum_entropy(eigenvalues, negative_tol=ENTROPY_NEGATIVE_TOL):
    """
    Shannon entropy in bits of a probability spectrum

    Args:
        eigenvalues (array-like): Spectrum, possibly with round-off negatives
        negative_tol (float): Most negative value tolerated before failing

    Returns:
        float: Entropy in bits
    """
    values = np.asarray(eigenvalues, dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValidationError("entropy of a spectrum with non-finite values")
    if values.size and values.min() < -negative_tol:
        raise ValidationError(f"negative eigenvalue {values.min():.3e} below -{negative_tol:g}")
    return float(np.sum(entropy_terms(np.clip(values, 0.0, 1.0))))


def binary_entropy(x):
    """H(x) = -x log2 x - (1-x) log2 (1-x)"""
    x = float(np.clip(x, 0.0, 1.0))
    return float(entropy_terms(x) + entropy_terms(1.0 - x))


def vn_entropy(rho):
    """
    Von Neumann entropy in bits

    Args:
        rho (array-like): Hermitian, unit-trace, PSD matrix

    Returns:
        float: S(rho) = -sum lambda log2 lambda
    """
    rho = as_matrix(rho)
    trace = np.trace(rho).real
    if abs(trace - 1.0) > ENTROPY_NEGATIVE_TOL:
        raise ValidationError(f"vn_entropy expects unit trace, got {trace:.12f}")
    return spectrum_entropy(hermitian_eig(rho).eigenvalues)


def trace_distance(a, b):
    """
    Trace distance 1/2 sum |eigenvalues(a - b)|

    Args:
        a (array-like): Hermitian matrix
        b (array-like): Hermitian matrix of the same dimension

    Returns:
        float: Distance in [0, 1] for density matrices
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(hermitian_eig(a - b).eigenvalues)))


def psd_sqrt(m):
    """Square root of a Hermitian PSD matrix via its spectrum"""
    spectrum = hermitian_eig(m)
    roots = np.sqrt(np.clip(spectrum.eigenvalues, 0.0, None))
    vecs = spectrum.eigenvectors
    return (vecs * roots) @ vecs.conj().T


def reassemble(spectrum):
    """V diag(lambda) V^dagger"""
    vecs = spectrum.eigenvectors
    return (vecs * spectrum.eigenvalues) @ vecs.conj().T


def validate_density_matrix(rho, tol=HERMITIAN_TOL, dim=None):
    """
    Check that a matrix is a physical state

    Args:
        rho (array-like): Candidate density matrix
        tol (float): Tolerance for Hermiticity, trace and positivity
        dim (int): Required dimension, if any

    Returns:
        ndarray: The matrix, Hermitian-symmetrized
    """
    rho = as_matrix(rho)
    if dim is not None and rho.shape != (dim, dim):
        raise ValidationError(f"expected a {dim}x{dim} density matrix, got {rho.shape}")
    if hermiticity_error(rho) > tol:
        raise ValidationError("density matrix is not Hermitian")
    rho = (rho + rho.conj().T) / 2
    trace = np.trace(rho).real
    if abs(trace - 1.0) > tol:
        raise ValidationError(f"density matrix trace is {trace:.12f}, expected 1")
    smallest = hermitian_eig(rho).eigenvalues[-1]
    if smallest < -tol:
        raise ValidationError(f"density matrix has negative eigenvalue {smallest:.3e}")
    return rho
