"""Information-theoretic quantities of an evolving system-ancilla qubit pair.

All quantities are in bits (base-2 logarithms).  The central object is the
quantum loss of a joint system-ancilla state that started pure: the initial
system entropy minus the coherent information of the evolved pair.  For the
fixed Bell initialization the initial system entropy is exactly 1 bit.

Conventions: 0*log2(0) is 0, eigenvalues in [-1e-12, 0) are treated as
roundoff and clipped before taking logarithms, and in every bipartite
function the first tensor factor is the (evolving) system, the second the
(static) ancilla.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .states import StateValidationError, density_spectrum, projector, require_pure

LOSS_BOUND_TOL = 1e-9


def binary_entropy(p: float) -> float:
    """Entropy in bits of a {p, 1-p} distribution."""
    if p < -1e-12 or p > 1.0 + 1e-12:
        raise ValueError(f"probability {p!r} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            out -= q * math.log2(q)
    return out


def shannon_entropy(probabilities) -> float:
    """Entropy in bits of a nonnegative weight vector, with 0*log2(0) = 0."""
    probabilities = np.asarray(probabilities, dtype=float)
    positive = probabilities[probabilities > 0.0]
    # + 0.0 turns the negative zero of an all-certain distribution into 0.0
    return float(-(positive * np.log2(positive)).sum() + 0.0)


def von_neumann_entropy(rho) -> float:
    """Entropy in bits of a density matrix; lies in [0, log2(dim)]."""
    return shannon_entropy(density_spectrum(rho))


def _marginal_entropy(rho_ab: np.ndarray, keep: int) -> float:
    # Marginals of a validated joint state are valid by construction; one
    # direct eigvalsh avoids a redundant validation pass.
    marginal = qmath.partial_trace(rho_ab, keep)
    vals = np.linalg.eigvalsh((marginal + marginal.conj().T) / 2)
    return shannon_entropy(qmath.clip_eigenvalues(vals))


def conditional_entropy(rho_ab, condition_on: int) -> float:
    """S(joint) - S(conditioned subsystem); negative for entangled states.

    ``condition_on`` is 0 for the first tensor factor, 1 for the second.
    """
    rho_ab = np.asarray(rho_ab, dtype=complex)
    joint = shannon_entropy(density_spectrum(rho_ab, dim=4))
    return joint - _marginal_entropy(rho_ab, condition_on)


def mutual_information(rho_ab) -> float:
    """S(A) + S(B) - S(AB) of a two-qubit state, in bits."""
    rho_ab = np.asarray(rho_ab, dtype=complex)
    joint = shannon_entropy(density_spectrum(rho_ab, dim=4))
    return _marginal_entropy(rho_ab, 0) + _marginal_entropy(rho_ab, 1) - joint


def entropy_exchange(rho_sa_t) -> float:
    """Entropy in bits of the evolved joint system-ancilla state.

    Because the ancilla is untouched and the total state including the
    environment stays pure, this equals the environment entropy after the
    evolution, i.e. the information handed to the environment.
    """
    return shannon_entropy(density_spectrum(rho_sa_t, dim=4))


def coherent_information(rho_sa_t) -> float:
    """Entropy of the evolved system marginal minus the entropy exchange."""
    rho_sa_t = np.asarray(rho_sa_t, dtype=complex)
    joint = shannon_entropy(density_spectrum(rho_sa_t, dim=4))
    return _marginal_entropy(rho_sa_t, 0) - joint


def _loss_from_parts(initial_system_entropy: float, s_system: float, s_exchange: float) -> float:
    loss = initial_system_entropy - (s_system - s_exchange)
    bound = 2.0 * min(initial_system_entropy, s_exchange)
    if loss < -LOSS_BOUND_TOL or loss > bound + LOSS_BOUND_TOL:
        raise StateValidationError(
            f"quantum loss {loss!r} violates its bounds [0, {bound!r}]; the state is "
            "numerically inconsistent with the stated initial system entropy"
        )
    return loss


def quantum_loss(rho_sa_t, initial_system_entropy: float = 1.0) -> float:
    """Information lost to the environment, in bits.

    ``initial_system_entropy`` is the system entropy *before* the evolution
    (1 for the Bell initialization); the state argument is the *evolved*
    joint pair.  The result is bounded by twice the smaller of the initial
    system entropy and the entropy exchange; violations beyond 1e-9 raise.
    """
    rho_sa_t = np.asarray(rho_sa_t, dtype=complex)
    s_exchange = shannon_entropy(density_spectrum(rho_sa_t, dim=4))
    s_system = _marginal_entropy(rho_sa_t, 0)
    return _loss_from_parts(initial_system_entropy, s_system, s_exchange)


def quantum_noise(rho_sa_t, loss: float) -> float:
    """Twice the entropy exchange minus the quantum loss (diagnostic only)."""
    return 2.0 * entropy_exchange(rho_sa_t) - loss


def mutual_entanglement(psi) -> float:
    """Twice the marginal entropy of a pure bipartite state, in bits.

    For pure states this coincides with the mutual information and
    quantifies the system-ancilla correlation available to be lost.
    """
    psi = require_pure(psi, dim=4)
    return 2.0 * _marginal_entropy(projector(psi), 1)


@dataclass(frozen=True)
class EntropySnapshot:
    """Every tracked entropy quantity of the joint pair at one time."""

    t: float
    s_system: float
    s_ancilla: float
    s_exchange: float
    coherent_info: float
    quantum_loss: float
    mutual_info: float
    quantum_noise: float

    @classmethod
    def from_state(cls, rho_sa, t: float = 0.0, initial_system_entropy: float = 1.0):
        """Compute all quantities of an evolved joint state in one pass."""
        rho_sa = np.asarray(rho_sa, dtype=complex)
        s_exchange = shannon_entropy(density_spectrum(rho_sa, dim=4))
        s_system = _marginal_entropy(rho_sa, 0)
        s_ancilla = _marginal_entropy(rho_sa, 1)
        coherent = s_system - s_exchange
        loss = _loss_from_parts(initial_system_entropy, s_system, s_exchange)
        return cls(
            t=float(t),
            s_system=s_system,
            s_ancilla=s_ancilla,
            s_exchange=s_exchange,
            coherent_info=coherent,
            quantum_loss=loss,
            mutual_info=s_system + s_ancilla - s_exchange,
            quantum_noise=2.0 * s_exchange - loss,
        )
