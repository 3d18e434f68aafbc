"""Shared generators for random states and unitaries used across the tests."""

import numpy as np


def random_density(rng, dim):
    """Random full-rank density matrix via a Ginibre draw."""
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def givens_unitary(rng, dim, n_rotations=12):
    """Random unitary assembled from complex Givens rotations."""
    u = np.eye(dim, dtype=complex)
    for _ in range(n_rotations):
        i, j = rng.choice(dim, size=2, replace=False)
        theta = rng.uniform(0, 2 * np.pi)
        phi = rng.uniform(0, 2 * np.pi)
        c, s = np.cos(theta), np.sin(theta)
        rot = np.eye(dim, dtype=complex)
        rot[i, i] = c
        rot[j, j] = c
        rot[i, j] = -np.exp(1j * phi) * s
        rot[j, i] = np.exp(-1j * phi) * s
        u = rot @ u
    return u
