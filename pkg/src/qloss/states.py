"""Density-matrix validation, Bell-pair initialization and purification.

States are plain numpy arrays: density matrices are Hermitian, unit-trace,
positive-semidefinite complex matrices; pure states are unit-norm complex
vectors.  Two-qubit objects order the tensor factors as system (x) ancilla,
so basis index 2*s + a addresses system level s and ancilla level a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmath

TRACE_TOL = 1e-10
NORM_TOL = 1e-12


class StateValidationError(ValueError):
    """A matrix failed the density-matrix contract (or a vector the norm one)."""


@dataclass(frozen=True)
class ValidationReport:
    """Deviations of a candidate density matrix from its invariants."""

    hermiticity_deviation: float
    trace_deviation: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermiticity_deviation <= qmath.HERMITICITY_TOL
            and self.trace_deviation <= TRACE_TOL
            and self.min_eigenvalue >= qmath.EIGENVALUE_FLOOR
        )

    def describe(self) -> str:
        return (
            f"hermiticity deviation {self.hermiticity_deviation:.3e}, "
            f"trace deviation {self.trace_deviation:.3e}, "
            f"min eigenvalue {self.min_eigenvalue:.3e}"
        )


def validate(rho) -> ValidationReport:
    """Report how far ``rho`` is from being a valid density matrix.

    Never raises for numeric defects; shape errors (non-square input) are
    programming errors and do raise.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    herm_dev = qmath.hermiticity_deviation(rho)
    trace_dev = float(abs(np.trace(rho) - 1.0))
    eigvals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    return ValidationReport(
        hermiticity_deviation=herm_dev,
        trace_deviation=trace_dev,
        min_eigenvalue=float(eigvals.min()),
    )


def require_density(rho, context: str = "") -> np.ndarray:
    """Return ``rho`` as a complex array, raising if it is not a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    report = validate(rho)
    if not report.ok:
        prefix = f"{context}: " if context else ""
        raise StateValidationError(f"{prefix}invalid density matrix ({report.describe()})")
    return rho


def density_spectrum(rho, dim: int | None = None) -> np.ndarray:
    """Validated, descending, roundoff-clipped spectrum of a density matrix.

    This is the single eigendecomposition shared by every entropy
    evaluation; it enforces Hermiticity, unit trace and positivity in one
    pass.  ``dim`` optionally pins the expected matrix dimension.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise StateValidationError(f"expected a square matrix, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise StateValidationError(f"expected a {dim}x{dim} matrix, got shape {rho.shape}")
    herm_dev = qmath.hermiticity_deviation(rho)
    if herm_dev > qmath.HERMITICITY_TOL:
        raise StateValidationError(f"invalid density matrix (hermiticity deviation {herm_dev:.3e})")
    trace_dev = float(abs(np.trace(rho) - 1.0))
    if trace_dev > TRACE_TOL:
        raise StateValidationError(f"invalid density matrix (trace deviation {trace_dev:.3e})")
    vals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)[::-1]
    if vals.min() < qmath.EIGENVALUE_FLOOR:
        raise StateValidationError(
            f"invalid density matrix (min eigenvalue {float(vals.min()):.3e})"
        )
    return np.clip(vals, 0.0, None)


def require_pure(psi, dim: int | None = None) -> np.ndarray:
    """Return ``psi`` as a complex vector, raising unless it has unit norm."""
    psi = np.asarray(psi, dtype=complex).ravel()
    if dim is not None and psi.size != dim:
        raise StateValidationError(f"expected a state vector of dimension {dim}, got {psi.size}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > NORM_TOL:
        raise StateValidationError(f"state vector is not normalized (norm {norm!r})")
    return psi


def projector(psi) -> np.ndarray:
    """Rank-1 density matrix of a pure state vector."""
    psi = require_pure(psi)
    return np.outer(psi, psi.conj())


def bell_state() -> np.ndarray:
    """The maximally entangled pair (|00> + |11>)/sqrt(2), system first."""
    return np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def purify(rho) -> np.ndarray:
    """Purify a single-qubit density matrix with a qubit ancilla.

    Returns the Schmidt-form vector sum_i sqrt(l_i) |v_i> (x) |i> where l_i
    are the eigenvalues of ``rho`` in descending order, |v_i> the matching
    eigenvectors, and the ancilla runs through the computational basis in
    that order.  Tracing out the ancilla recovers ``rho``.  For degenerate
    eigenvalues the eigenbasis (and hence the vector) is not unique; only
    basis-independent quantities of the output should be relied on.
    """
    rho = require_density(rho, context="purify")
    if rho.shape != (2, 2):
        raise StateValidationError(f"purify expects a 2x2 density matrix, got shape {rho.shape}")
    eig = qmath.hermitian_eigensystem(rho)
    weights = qmath.clip_eigenvalues(eig.eigenvalues)
    psi = np.zeros(4, dtype=complex)
    for i in range(2):
        ancilla = np.zeros(2, dtype=complex)
        ancilla[i] = 1.0
        psi += np.sqrt(weights[i]) * np.kron(eig.eigenvectors[:, i], ancilla)
    return psi / np.linalg.norm(psi)
