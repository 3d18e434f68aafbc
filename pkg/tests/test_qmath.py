import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qloss import qmath
from qloss.states import bell_state, projector

from helpers import givens_unitary, random_hermitian

I2 = np.eye(2)
I4 = np.eye(4)


def test_kron_identity():
    assert np.array_equal(qmath.kron(I2, I2), I4)


def test_kron_sigma_z_identity():
    expected = np.diag([1.0, 1.0, -1.0, -1.0]).astype(complex)
    assert np.array_equal(qmath.kron(qmath.SIGMA_Z, I2), expected)


def test_kron_xx_fixes_bell_vector():
    # sigma_x (x) sigma_x swaps |00> <-> |11| and |01> <-> |10>, so the
    # maximally entangled vector is an eigenvector with eigenvalue 1.
    xx = qmath.kron(qmath.SIGMA_X, qmath.SIGMA_X)
    psi = bell_state()
    assert np.allclose(xx @ psi, psi, atol=1e-15)


def test_partial_trace_bell_marginals():
    rho = projector(bell_state())
    for keep in (0, 1):
        assert np.allclose(qmath.partial_trace(rho, keep), I2 / 2, atol=1e-15)


def test_partial_trace_product_state():
    rho_a = np.array([[0.7, 0.1j], [-0.1j, 0.3]], dtype=complex)
    rho_b = np.array([[0.25, 0.0], [0.0, 0.75]], dtype=complex)
    joint = qmath.kron(rho_a, rho_b)
    assert np.allclose(qmath.partial_trace(joint, 0), rho_a, atol=1e-14)
    assert np.allclose(qmath.partial_trace(joint, 1), rho_b, atol=1e-14)


def test_partial_trace_damped_pair_marginal():
    # Joint state of the damped Bell pair at coherence amplitude G = 0.6:
    # summing the diagonal 2x2 blocks must give diag(1 - g/2, g/2).
    g = 0.6 ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5
    rho[1, 1] = (1 - g) / 2
    rho[3, 3] = g / 2
    rho[0, 3] = rho[3, 0] = 0.6 / 2
    marginal = qmath.partial_trace(rho, 0)
    assert np.allclose(marginal, np.diag([1 - g / 2, g / 2]), atol=1e-12)


def test_partial_trace_rejects_bad_shape():
    with pytest.raises(ValueError, match="4x4"):
        qmath.partial_trace(np.eye(2), 0)
    with pytest.raises(ValueError, match="keep"):
        qmath.partial_trace(np.eye(4), 2)


def test_eigenvalues_diagonal():
    eig = qmath.hermitian_eigenvalues(np.diag([0.25, 0.75]))
    assert np.allclose(eig.eigenvalues, [0.75, 0.25], atol=1e-15)


def test_eigenvalues_damped_pair_block():
    # The damped-pair matrix has a rank-1 corner block: spectrum
    # {(1+g)/2, (1-g)/2, 0, 0} at squared amplitude g.
    g = 0.3
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 0.5
    rho[1, 1] = (1 - g) / 2
    rho[3, 3] = g / 2
    rho[0, 3] = rho[3, 0] = np.sqrt(g) / 2
    eig = qmath.hermitian_eigenvalues(rho)
    assert np.allclose(eig.eigenvalues, [(1 + g) / 2, (1 - g) / 2, 0.0, 0.0], atol=1e-12)


def test_eigenvalues_pauli_pair_blocks():
    # Two symmetric 2x2 blocks diagonalize by hand.
    f, g, h = 0.8, 0.5, 0.4
    rho = np.zeros((4, 4))
    rho[0, 0] = rho[3, 3] = (1 + f) / 4
    rho[1, 1] = rho[2, 2] = (1 - f) / 4
    rho[0, 3] = rho[3, 0] = (g + h) / 4
    rho[1, 2] = rho[2, 1] = (g - h) / 4
    expected = sorted(
        [(1 + f + g + h) / 4, (1 + f - g - h) / 4, (1 - f + g - h) / 4, (1 - f - g + h) / 4],
        reverse=True,
    )
    eig = qmath.hermitian_eigenvalues(rho)
    assert np.allclose(eig.eigenvalues, expected, atol=1e-14)


def test_non_hermitian_rejected_with_deviation():
    m = np.array([[1.0, 1e-3], [0.0, 1.0]])
    with pytest.raises(ValueError, match="not Hermitian"):
        qmath.hermitian_eigenvalues(m)


def test_clip_eigenvalues():
    clipped = qmath.clip_eigenvalues(np.array([0.5, -1e-13]))
    assert clipped[1] == 0.0
    with pytest.raises(ValueError, match="positive semidefinite"):
        qmath.clip_eigenvalues(np.array([0.5, -1e-11]))


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 4]))
@settings(max_examples=60, deadline=None)
def test_eigenvalue_sum_equals_trace(seed, dim):
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, dim)
    eig = qmath.hermitian_eigenvalues(m)
    assert abs(eig.eigenvalues.sum() - np.trace(m).real) < 1e-10


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_conjugated_diagonal_recovers_spectrum(seed):
    rng = np.random.default_rng(seed)
    diag = rng.uniform(-2, 2, size=4)
    u = givens_unitary(rng, 4)
    m = u @ np.diag(diag) @ u.conj().T
    eig = qmath.hermitian_eigenvalues(m)
    assert np.allclose(eig.eigenvalues, np.sort(diag)[::-1], atol=1e-9)


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=40, deadline=None)
def test_partial_trace_of_kron(seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, 2)
    b = random_hermitian(rng, 2)
    joint = qmath.kron(a, b)
    assert np.allclose(qmath.partial_trace(joint, 0), a * np.trace(b), atol=1e-12)
    assert np.allclose(qmath.partial_trace(joint, 1), b * np.trace(a), atol=1e-12)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from([2, 4]))
@settings(max_examples=40, deadline=None)
def test_eigensystem_reconstruction(seed, dim):
    rng = np.random.default_rng(seed)
    m = random_hermitian(rng, dim)
    eig = qmath.hermitian_eigensystem(m)
    rebuilt = eig.eigenvectors @ np.diag(eig.eigenvalues) @ eig.eigenvectors.conj().T
    assert np.abs(rebuilt - m).max() < 1e-10
    overlap = eig.eigenvectors.conj().T @ eig.eigenvectors
    assert np.abs(overlap - np.eye(dim)).max() < 1e-10
