"""Shared generators and small independent oracles for the test suite."""

import numpy as np

from seqmeas import DensityMatrix, PauliString

LETTERS = ("I", "X", "Y", "Z")


def random_pauli(rng, n, nontrivial=True):
    while True:
        factors = tuple(LETTERS[i] for i in rng.integers(0, 4, size=n))
        if not nontrivial or any(f != "I" for f in factors):
            return PauliString(factors, 1 if rng.integers(2) else -1)


def random_density(rng, n):
    """Full-rank random state (Ginibre construction)."""
    dim = 2**n
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(n, m / np.real(np.trace(m)))


def random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


def kron_loop(a, b):
    """Nested-loop Kronecker product, independent of np.kron."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra * rb, ca * cb), dtype=complex)
    for i in range(ra):
        for j in range(ca):
            for k in range(rb):
                for l in range(cb):
                    out[i * rb + k, j * cb + l] = a[i, j] * b[k, l]
    return out


def expm_taylor(m, terms=60):
    """Matrix exponential by plain Taylor series, for oracle use."""
    out = np.eye(m.shape[0], dtype=complex)
    term = np.eye(m.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    return out


def max_abs(x):
    return float(np.max(np.abs(x)))
