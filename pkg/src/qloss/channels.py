"""Qubit channel families acting on half of a maximally entangled pair.

Three named families carry closed-form evolution of the Bell pair:

* ``dephasing``       -- rate gamma(t) damping the coherences by
                         exp(-Gamma(t)) with Gamma the running integral of
                         the rate; Markovian exactly when gamma(t) >= 0.
* ``amplitude_damping`` -- decay into a Lorentzian bath of spectral width
                         ``width`` and coupling ``coupling``; the populations
                         and coherences follow the decoherence amplitude
                         G(t); Markovian exactly when |G| is non-increasing.
* ``pauli``           -- random-unitary dynamics with one rate per Pauli
                         axis; Markovian exactly when all pairwise rate sums
                         stay nonnegative.

A ``generic`` family accepts arbitrary (rate, 2x2 jump operator) pairs in
the standard dissipator convention

    d rho / dt = -i [H, rho] + sum_k g_k(t) (L_k rho L_k^dag
                                             - (L_k^dag L_k rho + rho L_k^dag L_k) / 2)

applied to the system half of the pair.  Note the named families' printed
generators use half rates for self-adjoint jumps: dephasing with rate
gamma corresponds to a generic term (gamma/2, sigma_z).

Every family also has a generator representation, so the fixed-step
integrator doubles as an independent cross-check of the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import qmath
from .states import bell_state, projector, require_density

DEFAULT_STEP = 1e-3
TRACE_DRIFT_LIMIT = 1e-8
_TRACE_RENORM_THRESHOLD = 1e-12
_SIMPSON_REL_TOL = 1e-8
_CRITICAL_TOL = 1e-12

DEPHASING = "dephasing"
AMPLITUDE_DAMPING = "amplitude_damping"
PAULI = "pauli"
GENERIC = "generic"


class StepSizeError(RuntimeError):
    """Integration step too large: the trace drifted beyond tolerance."""


# ---------------------------------------------------------------------------
# decay rates gamma(t) and their running integrals Gamma(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RateFunction:
    """Scalar decay rate gamma(t) with an exact or numeric antiderivative.

    Kinds: ``constant`` (a), ``sinusoid`` (a*sin(w*t)), ``damped_cosine``
    (a*exp(-b*t)*cos(w*t)) and ``tabulated`` (linear interpolation of (t,
    gamma) samples).  The first three integrate in closed form; tabulated
    rates integrate by composite Simpson refined to 1e-8 relative error.
    """

    kind: str
    amplitude: float = 0.0
    frequency: float = 0.0
    damping: float = 0.0
    times: np.ndarray | None = None
    values: np.ndarray | None = None

    @classmethod
    def constant(cls, amplitude: float) -> "RateFunction":
        return cls(kind="constant", amplitude=float(amplitude))

    @classmethod
    def sinusoid(cls, amplitude: float, frequency: float) -> "RateFunction":
        return cls(kind="sinusoid", amplitude=float(amplitude), frequency=float(frequency))

    @classmethod
    def damped_cosine(cls, amplitude: float, damping: float, frequency: float) -> "RateFunction":
        return cls(
            kind="damped_cosine",
            amplitude=float(amplitude),
            damping=float(damping),
            frequency=float(frequency),
        )

    @classmethod
    def tabulated(cls, times, values) -> "RateFunction":
        times = np.asarray(times, dtype=float)
        values = np.asarray(values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape or times.size < 2:
            raise ValueError("tabulated rate needs matching 1-d time and value arrays (>= 2 samples)")
        if times[0] != 0.0:
            raise ValueError("tabulated rate must start at t = 0")
        if not np.all(np.diff(times) > 0):
            raise ValueError("tabulated rate needs strictly increasing sample times")
        return cls(kind="tabulated", times=times.copy(), values=values.copy())

    def rate(self, t: float) -> float:
        """gamma(t)."""
        if t < 0:
            raise ValueError(f"rate requested at negative time {t!r}")
        if self.kind == "constant":
            return self.amplitude
        if self.kind == "sinusoid":
            return self.amplitude * math.sin(self.frequency * t)
        if self.kind == "damped_cosine":
            return self.amplitude * math.exp(-self.damping * t) * math.cos(self.frequency * t)
        if self.kind == "tabulated":
            if t > self.times[-1]:
                raise ValueError(
                    f"time {t!r} beyond the tabulated range [0, {self.times[-1]!r}]"
                )
            return float(np.interp(t, self.times, self.values))
        raise ValueError(f"unknown rate kind {self.kind!r}")

    def integral(self, t: float) -> float:
        """Gamma(t), the integral of the rate from 0 to t."""
        if t < 0:
            raise ValueError(f"rate integral requested at negative time {t!r}")
        if t == 0:
            return 0.0
        if self.kind == "constant":
            return self.amplitude * t
        if self.kind == "sinusoid":
            w = self.frequency
            if w == 0.0:
                return 0.0
            return self.amplitude * (1.0 - math.cos(w * t)) / w
        if self.kind == "damped_cosine":
            b, w = self.damping, self.frequency
            denom = b * b + w * w
            if denom == 0.0:
                return self.amplitude * t
            return (
                self.amplitude
                * (math.exp(-b * t) * (w * math.sin(w * t) - b * math.cos(w * t)) + b)
                / denom
            )
        if self.kind == "tabulated":
            if t > self.times[-1]:
                raise ValueError(
                    f"time {t!r} beyond the tabulated range [0, {self.times[-1]!r}]"
                )
            return _refined_simpson(
                lambda xs: np.interp(xs, self.times, self.values), 0.0, float(t)
            )
        raise ValueError(f"unknown rate kind {self.kind!r}")


def _refined_simpson(f, a: float, b: float, rel_tol: float = _SIMPSON_REL_TOL) -> float:
    """Composite Simpson, doubling the panel count until self-consistent."""
    n = 64
    previous = _simpson_panels(f, a, b, n)
    while n < 2 ** 22:
        n *= 2
        current = _simpson_panels(f, a, b, n)
        if abs(current - previous) <= rel_tol * max(1.0, abs(current)):
            return current
        previous = current
    return previous


def _simpson_panels(f, a: float, b: float, n: int) -> float:
    xs = np.linspace(a, b, n + 1)
    ys = np.asarray(f(xs), dtype=float)
    h = (b - a) / n
    return h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum() + 2.0 * ys[2:-1:2].sum())


def gamma_integral(rate: RateFunction, t: float) -> float:
    """Integral of the decay rate from 0 to ``t`` (dimensionless)."""
    return rate.integral(t)


# ---------------------------------------------------------------------------
# Lorentzian bath for the amplitude-damping family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LorentzianBath:
    """Resonant Lorentzian environment: spectral width and coupling strength.

    ``width`` is the spectral width (inverse bath correlation time) and
    ``coupling`` the system-bath coupling constant (inverse relaxation
    time), both strictly positive.  ``width > 2 * coupling`` is the weak
    (monotone) regime; below that the decoherence amplitude oscillates and
    develops zeros.
    """

    width: float
    coupling: float

    def __post_init__(self):
        if self.width <= 0 or self.coupling <= 0:
            raise ValueError(
                f"bath parameters must be strictly positive, got width={self.width!r}, "
                f"coupling={self.coupling!r}"
            )


def _bath_discriminant(bath: LorentzianBath) -> float:
    return bath.width * bath.width - 2.0 * bath.coupling * bath.width


def decoherence_amplitude(bath: LorentzianBath, t: float) -> float:
    """Amplitude G(t) scaling coherences (and G^2 populations); G(0) = 1.

    Weak coupling uses the hyperbolic branch, strong coupling the
    oscillatory one, and the critical point the polynomial limit; all three
    agree continuously.
    """
    if t < 0:
        raise ValueError(f"decoherence amplitude requested at negative time {t!r}")
    lam = bath.width
    s = _bath_discriminant(bath)
    envelope = math.exp(-lam * t / 2.0)
    d = math.sqrt(abs(s))
    if d < _CRITICAL_TOL:
        return envelope * (1.0 + lam * t / 2.0)
    if s > 0:
        return envelope * (math.cosh(d * t / 2.0) + (lam / d) * math.sinh(d * t / 2.0))
    return envelope * (math.cos(d * t / 2.0) + (lam / d) * math.sin(d * t / 2.0))


def decoherence_amplitude_derivative(bath: LorentzianBath, t: float) -> float:
    """dG/dt; always starts at zero and stays nonpositive in the weak regime."""
    if t < 0:
        raise ValueError(f"decoherence amplitude requested at negative time {t!r}")
    lam, g0 = bath.width, bath.coupling
    s = _bath_discriminant(bath)
    envelope = math.exp(-lam * t / 2.0)
    d = math.sqrt(abs(s))
    if d < _CRITICAL_TOL:
        return -envelope * g0 * lam * t / 2.0
    if s > 0:
        return -envelope * (g0 * lam / d) * math.sinh(d * t / 2.0)
    return -envelope * (g0 * lam / d) * math.sin(d * t / 2.0)


def amplitude_damping_rate(bath: LorentzianBath, t: float) -> float:
    """Time-local decay rate of the damping family, -2 Re(G'(t)/G(t)).

    Diverges at zeros of the decoherence amplitude (strong coupling), where
    the time-local generator ceases to exist; the closed-form evolution
    remains well defined there.
    """
    g = decoherence_amplitude(bath, t)
    if g == 0.0:
        raise ZeroDivisionError(
            f"time-local rate is singular at t={t!r}: the decoherence amplitude vanishes"
        )
    return -2.0 * decoherence_amplitude_derivative(bath, t) / g


# ---------------------------------------------------------------------------
# channel models and the closed-form Bell-pair evolutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChannelModel:
    """A parameterized qubit dynamical map family applied to the Bell pair."""

    family: str
    rates: tuple[RateFunction, ...] = ()
    bath: LorentzianBath | None = None
    jump_terms: tuple[tuple[RateFunction, np.ndarray], ...] = ()
    hamiltonian: np.ndarray | None = None
    step: float = DEFAULT_STEP


def dephasing_channel(rate: RateFunction) -> ChannelModel:
    """Pure dephasing with decay rate gamma(t)."""
    return ChannelModel(family=DEPHASING, rates=(rate,))


def amplitude_damping_channel(width: float, coupling: float) -> ChannelModel:
    """Decay into a resonant Lorentzian bath."""
    return ChannelModel(family=AMPLITUDE_DAMPING, bath=LorentzianBath(width, coupling))


def pauli_channel(rate_x: RateFunction, rate_y: RateFunction, rate_z: RateFunction) -> ChannelModel:
    """Random-unitary dynamics with one rate per Pauli axis."""
    return ChannelModel(family=PAULI, rates=(rate_x, rate_y, rate_z))


def generic_channel(jump_terms, hamiltonian=None, step: float = DEFAULT_STEP) -> ChannelModel:
    """Arbitrary time-local generator from (rate, 2x2 jump operator) pairs.

    Rates follow the standard dissipator convention (see the module
    docstring); an optional 2x2 Hamiltonian adds a commutator term.
    Evolution has no closed form and is delegated to the integrator with
    the given ``step``.
    """
    terms = []
    for rate, jump in jump_terms:
        jump = np.asarray(jump, dtype=complex)
        if jump.shape != (2, 2):
            raise ValueError(f"jump operators must be 2x2, got shape {jump.shape}")
        terms.append((rate, jump))
    if hamiltonian is not None:
        hamiltonian = qmath.require_hermitian(hamiltonian)
        if hamiltonian.shape != (2, 2):
            raise ValueError(f"hamiltonian must be 2x2, got shape {hamiltonian.shape}")
    if step <= 0:
        raise ValueError(f"integrator step must be positive, got {step!r}")
    return ChannelModel(
        family=GENERIC, jump_terms=tuple(terms), hamiltonian=hamiltonian, step=step
    )


def _dephasing_bell(decay: float) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 0.5
    rho[0, 3] = rho[3, 0] = decay / 2.0
    return rho


def _amplitude_damping_bell(g: complex) -> np.ndarray:
    gsq = abs(g) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5
    rho[1, 1] = (1.0 - gsq) / 2.0
    rho[3, 3] = gsq / 2.0
    rho[0, 3] = np.conj(g) / 2.0
    rho[3, 0] = g / 2.0
    return rho


def _pauli_bell(f: float, g: float, h: float) -> np.ndarray:
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = (1.0 + f) / 4.0
    rho[1, 1] = rho[2, 2] = (1.0 - f) / 4.0
    rho[0, 3] = rho[3, 0] = (g + h) / 4.0
    rho[1, 2] = rho[2, 1] = (g - h) / 4.0
    return rho


def evolve_bell(channel: ChannelModel, t: float) -> np.ndarray:
    """Evolved joint state of the Bell pair under the channel at time ``t``.

    Named families use their closed forms; the generic family integrates
    its generator.  The output is validated, so rate choices that push the
    map outside complete positivity (for example pauli rates whose pairwise
    sums start negative) raise instead of producing unphysical entropies.
    """
    if t < 0:
        raise ValueError(f"evolution requested at negative time {t!r}")
    if channel.family == DEPHASING:
        decay = math.exp(-gamma_integral(channel.rates[0], t))
        rho = _dephasing_bell(decay)
    elif channel.family == AMPLITUDE_DAMPING:
        rho = _amplitude_damping_bell(decoherence_amplitude(channel.bath, t))
    elif channel.family == PAULI:
        g1, g2, g3 = (gamma_integral(r, t) for r in channel.rates)
        rho = _pauli_bell(
            math.exp(-(g1 + g2)), math.exp(-(g2 + g3)), math.exp(-(g1 + g3))
        )
    elif channel.family == GENERIC:
        rho = integrate_master_equation(channel, t, channel.step)
    else:
        raise ValueError(f"unknown channel family {channel.family!r}")
    return require_density(
        rho, context=f"{channel.family} evolution at t={t!r} left the physical state space"
    )


# Closed-form quantum-loss references for the named families.  These are the
# analytic counterparts of the eigenvalue path through the entropy module and
# are deliberately written out with plain math calls so the two routes stay
# independent.

def dephasing_loss(gamma_int: float) -> float:
    """Quantum loss of the dephased pair as a function of Gamma(t)."""
    return _plogp_sum(
        ((1.0 + math.exp(-gamma_int)) / 2.0, (1.0 - math.exp(-gamma_int)) / 2.0)
    )


def amplitude_damping_loss(g_sq: float) -> float:
    """Quantum loss of the damped pair as a function of |G(t)|^2."""
    if g_sq < 0 or g_sq > 1:
        raise ValueError(f"|G|^2 must lie in [0, 1], got {g_sq!r}")
    total = 1.0
    for weight, sign in (
        ((2.0 - g_sq) / 2.0, 1.0),
        (g_sq / 2.0, 1.0),
        ((1.0 - g_sq) / 2.0, -1.0),
        ((1.0 + g_sq) / 2.0, -1.0),
    ):
        if weight > 0.0:
            total += sign * weight * math.log2(weight)
    return total


def pauli_state_eigenvalues(f: float, g: float, h: float) -> np.ndarray:
    """Spectrum of the pauli-evolved pair from its two 2x2 blocks, descending."""
    vals = np.array(
        [
            (1.0 + f + (g + h)) / 4.0,
            (1.0 + f - (g + h)) / 4.0,
            (1.0 - f + (g - h)) / 4.0,
            (1.0 - f - (g - h)) / 4.0,
        ]
    )
    return np.sort(vals)[::-1]


def pauli_loss(f: float, g: float, h: float) -> float:
    """Quantum loss of the pauli-evolved pair: the joint-state entropy."""
    return _plogp_sum(pauli_state_eigenvalues(f, g, h))


def _plogp_sum(weights) -> float:
    total = 0.0
    for w in weights:
        if w < -1e-12:
            raise ValueError(f"weight {w!r} is negative; state outside the physical domain")
        if w > 0.0:
            total -= w * math.log2(w)
    return total


# ---------------------------------------------------------------------------
# fixed-step integrator (independent cross-check of the closed forms)
# ---------------------------------------------------------------------------

def _liouvillian_terms(channel: ChannelModel):
    """Generator of the channel extended to the pair: jump terms and drift."""
    identity = qmath.IDENTITY_2
    if channel.family == DEPHASING:
        rate = channel.rates[0]
        terms = [(lambda t, r=rate: 0.5 * r.rate(t), qmath.kron(qmath.SIGMA_Z, identity))]
        hamiltonian = None
    elif channel.family == AMPLITUDE_DAMPING:
        bath = channel.bath
        terms = [
            (lambda t, b=bath: amplitude_damping_rate(b, t), qmath.kron(qmath.SIGMA_MINUS, identity))
        ]
        hamiltonian = None
    elif channel.family == PAULI:
        paulis = (qmath.SIGMA_X, qmath.SIGMA_Y, qmath.SIGMA_Z)
        terms = [
            (lambda t, r=rate: 0.5 * r.rate(t), qmath.kron(sigma, identity))
            for rate, sigma in zip(channel.rates, paulis)
        ]
        hamiltonian = None
    elif channel.family == GENERIC:
        terms = [
            (lambda t, r=rate: r.rate(t), qmath.kron(jump, identity))
            for rate, jump in channel.jump_terms
        ]
        hamiltonian = (
            None if channel.hamiltonian is None else qmath.kron(channel.hamiltonian, identity)
        )
    else:
        raise ValueError(f"unknown channel family {channel.family!r}")
    prepared = [(g, L, L.conj().T, L.conj().T @ L) for g, L in terms]
    return prepared, hamiltonian


def _rhs(terms, hamiltonian, t: float, rho: np.ndarray) -> np.ndarray:
    out = np.zeros_like(rho)
    if hamiltonian is not None:
        out += -1j * (hamiltonian @ rho - rho @ hamiltonian)
    for g_of_t, L, Ld, LdL in terms:
        g = g_of_t(t)
        if g != 0.0:
            out += g * (L @ rho @ Ld - 0.5 * (LdL @ rho + rho @ LdL))
    return out


def _rk4_step(terms, hamiltonian, t: float, rho: np.ndarray, h: float) -> np.ndarray:
    k1 = _rhs(terms, hamiltonian, t, rho)
    k2 = _rhs(terms, hamiltonian, t + h / 2.0, rho + (h / 2.0) * k1)
    k3 = _rhs(terms, hamiltonian, t + h / 2.0, rho + (h / 2.0) * k2)
    k4 = _rhs(terms, hamiltonian, t + h, rho + h * k3)
    return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _finalize(rho: np.ndarray) -> np.ndarray:
    rho = (rho + rho.conj().T) / 2.0
    drift = abs(float(np.trace(rho).real) - 1.0)
    if not drift <= TRACE_DRIFT_LIMIT:  # also catches NaN from a diverged run
        raise StepSizeError(
            f"trace drifted by {drift:.3e} (> {TRACE_DRIFT_LIMIT:.1e}); reduce the step"
        )
    if drift > _TRACE_RENORM_THRESHOLD:
        rho = rho / np.trace(rho).real
    return rho


def integrate_master_equation(channel: ChannelModel, t_end: float, step: float) -> np.ndarray:
    """Classical 4th-order fixed-step integration of the extended generator.

    Starts from the Bell projector and runs the time-local master equation
    of the channel on the system half.  The result is Hermitized and, for
    trace drift between 1e-12 and 1e-8, renormalized; larger drift raises
    :class:`StepSizeError`.  With step <= 1e-3 (natural rate units) the
    output matches the closed forms to better than 1e-6 per entry.
    """
    final = integrate_bell_grid(channel, [t_end], step)
    return final[0]


def integrate_bell_grid(channel: ChannelModel, times, step: float) -> list[np.ndarray]:
    """Single-pass integration capturing the state at each requested time.

    ``times`` must be nondecreasing and nonnegative.  Shares one trajectory
    across all capture points, so sampling n times costs the same as one
    integration to the latest.
    """
    if step <= 0:
        raise ValueError(f"integration step must be positive, got {step!r}")
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise ValueError("integration times must be nonnegative")
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("integration times must be nondecreasing")
    terms, hamiltonian = _liouvillian_terms(channel)
    rho = projector(bell_state())
    captured = []
    t = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for target in times:
            while t < target - 1e-15:
                h = min(step, target - t)
                rho = _rk4_step(terms, hamiltonian, t, rho, h)
                t += h
                if not np.isfinite(rho).all():
                    raise StepSizeError(
                        f"trace drifted beyond recovery: state diverged near t={t:.6g} "
                        "(non-finite entries); reduce the step"
                    )
            captured.append(_finalize(rho))
    return captured
