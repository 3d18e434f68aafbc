"""Dense complex-matrix kernel for one- and two-qubit state analysis.

Thin, contract-checking layer over numpy: Kronecker products, partial
traces of 4x4 operators, and Hermitian eigendecomposition with explicit
tolerances.  Matrices are plain complex numpy arrays; all functions are
pure and never mutate their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-10
# Eigenvalues in [EIGENVALUE_FLOOR, 0) are roundoff and get clipped to 0;
# anything below the floor indicates a genuinely invalid state.
EIGENVALUE_FLOOR = -1e-12

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # maps |1> to |0>
SIGMA_PLUS = SIGMA_MINUS.conj().T


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """Spectrum of a Hermitian matrix, eigenvalues sorted in descending order.

    ``eigenvectors`` (orthonormal columns, matching the eigenvalue order) is
    only populated by :func:`hermitian_eigensystem`; entropy-style consumers
    need the eigenvalues alone.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None = None


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def hermiticity_deviation(m) -> float:
    """Max absolute entry of m - m^dagger."""
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


def require_hermitian(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Return ``m`` as a complex array, raising if it is not Hermitian.

    The error message reports the offending deviation so callers can tell
    roundoff from genuinely wrong inputs.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = hermiticity_deviation(m)
    if dev > tol:
        raise ValueError(
            f"matrix is not Hermitian: max |m - m^dag| entry {dev:.3e} exceeds {tol:.1e}"
        )
    return m


def hermitian_eigenvalues(m, tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Eigenvalues of a Hermitian matrix, descending, without eigenvectors."""
    m = require_hermitian(m, tol)
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return HermitianEigen(eigenvalues=vals[::-1].copy())


def hermitian_eigensystem(m, tol: float = HERMITICITY_TOL) -> HermitianEigen:
    """Full eigendecomposition of a Hermitian matrix, descending order."""
    m = require_hermitian(m, tol)
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(vals)[::-1]
    return HermitianEigen(eigenvalues=vals[order].copy(), eigenvectors=vecs[:, order].copy())


def clip_eigenvalues(values, floor: float = EIGENVALUE_FLOOR) -> np.ndarray:
    """Zero out roundoff-negative eigenvalues; reject anything below ``floor``."""
    values = np.asarray(values, dtype=float)
    lowest = float(values.min())
    if lowest < floor:
        raise ValueError(
            f"eigenvalue {lowest:.3e} lies below the roundoff floor {floor:.1e}; "
            "the matrix is not positive semidefinite"
        )
    return np.clip(values, 0.0, None)


def partial_trace(rho, keep: int) -> np.ndarray:
    """Reduce a two-qubit (4x4) operator to a single-qubit (2x2) one.

    ``keep=0`` keeps the first tensor factor, ``keep=1`` the second.  The
    trace is preserved and Hermiticity of the input carries over.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"partial trace expects a 4x4 matrix, got shape {rho.shape}")
    if keep not in (0, 1):
        raise ValueError("keep must be 0 (first factor) or 1 (second factor)")
    r = rho.reshape(2, 2, 2, 2)
    if keep == 0:
        return np.einsum("ijkj->ik", r)
    return np.einsum("ijil->jl", r)
