"""Seeded random matrices for property checks."""

from __future__ import annotations

import numpy as np


def rng_for(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_unitary(rng, n: int, complex_: bool = False) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    # fix the phase convention so the distribution is Haar
    d = np.diag(R)
    return Q * (d / np.abs(d))


def random_hermitian(rng, n: int, complex_: bool = False) -> np.ndarray:
    G = rng.standard_normal((n, n))
    if complex_:
        G = G + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


def random_psd(rng, n: int, rank: int | None = None, complex_: bool = False) -> np.ndarray:
    """Wishart-type ``G G*`` with ``G`` of shape ``(n, rank)``."""
    r = n if rank is None else rank
    G = rng.standard_normal((n, r))
    if complex_:
        G = G + 1j * rng.standard_normal((n, r))
    A = G @ G.conj().T
    return (A + A.conj().T) / 2


def random_pd(rng, n: int, complex_: bool = False, log_spread: float = 2.0) -> np.ndarray:
    """Positive definite with eigenvalues ``exp(U(-spread, spread))``."""
    Q = random_unitary(rng, n, complex_)
    lam = np.exp(rng.uniform(-log_spread, log_spread, n))
    A = (Q * lam) @ Q.conj().T
    return (A + A.conj().T) / 2


def random_bd_matrix(rng, n: int, density: float = 0.7, normalize: bool = True) -> np.ndarray:
    """Real symmetric matrix with nonpositive off-diagonal entries.

    With ``normalize`` the result has unit operator norm.
    """
    off = -rng.uniform(0.0, 1.0, (n, n)) * (rng.uniform(size=(n, n)) < density)
    off = np.triu(off, 1)
    H = off + off.T + np.diag(rng.uniform(-1.0, 2.0, n))
    if normalize:
        norm = np.max(np.abs(np.linalg.eigvalsh(H)))
        if norm > 0:
            H = H / norm
    return H


def random_unit_vector(rng, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)
