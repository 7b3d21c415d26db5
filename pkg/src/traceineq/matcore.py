"""Dense Hermitian spectral calculus.

Everything here works on plain numpy arrays. Matrix functions go through
:class:`SpectralDecomposition`, produced either by the cyclic Jacobi solver
in :func:`eig_hermitian` or supplied exactly by a caller that already knows
the spectrum (see :mod:`traceineq.cex`).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

__all__ = [
    "InputError",
    "DomainError",
    "SpectralDecomposition",
    "PsdWitness",
    "as_hermitian",
    "symmetrize",
    "eig_hermitian",
    "diag_decomposition",
    "as_psd",
    "frac_power",
    "complex_power",
    "mat_exp",
    "mat_log",
    "schatten_norm",
    "hadamard",
    "trace_product",
    "householder",
    "divided_difference_exp",
    "exp_kernel_matrix",
    "log_mean",
]

HERMITIAN_RTOL = 1e-13
PARSE_RTOL = 1e-10
PSD_RTOL = 1e-12
ZERO_RTOL = 1e-12
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 60
TAYLOR_SWITCH = 1e-7


class InputError(ValueError):
    """Malformed input: wrong shape, not Hermitian, not PSD, bad exponent."""


class DomainError(ValueError):
    """Input is valid but outside the domain of the requested function."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    ``zero_rtol`` decides which eigenvalues count as exact zeros when a
    function is applied: those ``<= zero_rtol * max|eigenvalue|``. The Jacobi
    solver sets it to ``ZERO_RTOL`` so that roundoff noise in the null space
    is not amplified by small powers; decompositions known exactly use 0.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    zero_rtol: float = ZERO_RTOL

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.n else 0.0

    def zero_mask(self) -> np.ndarray:
        return self.eigenvalues <= self.zero_rtol * self.scale

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Return ``V diag(values) V*``."""
        V = self.eigenvectors
        return (V * values) @ V.conj().T

    def matrix(self) -> np.ndarray:
        return self.apply(self.eigenvalues)

    def power(self, s: float) -> np.ndarray:
        return frac_power(self, s)


@dataclass(frozen=True)
class PsdWitness:
    matrix: np.ndarray
    min_eigenvalue: float
    decomposition: SpectralDecomposition


MatrixLike = Union[np.ndarray, SpectralDecomposition, PsdWitness]


def symmetrize(A: np.ndarray) -> np.ndarray:
    return (A + A.conj().T) / 2


def _square(A) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    if not np.iscomplexobj(A):
        A = A.astype(float)
    return A


def as_hermitian(A, rtol: float = HERMITIAN_RTOL) -> np.ndarray:
    """Validate ``A`` as Hermitian and return its exactly symmetrized copy.

    Asymmetry above ``rtol * ||A||_F`` is an error, not something to repair.
    """
    A = _square(A)
    if np.iscomplexobj(A) and not np.any(A.imag):
        A = A.real.copy()
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.conj().T) > rtol * max(scale, np.finfo(float).tiny):
        raise InputError("matrix is not Hermitian")
    return symmetrize(A)


def _jacobi_pair(a_pp: float, a_qq: float, a_pq):
    """Rotation (c, s, phase) annihilating the (p, q) entry."""
    mag = abs(a_pq)
    phase = a_pq / mag
    tau = (a_qq - a_pp) / (2.0 * mag)
    if tau >= 0:
        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, t * c, phase


def eig_hermitian(A) -> SpectralDecomposition:
    """Cyclic Jacobi eigendecomposition of a Hermitian matrix.

    Sweeps the strict upper triangle row by row until the off-diagonal
    Frobenius mass drops below ``1e-14 * ||A||_F``. Real symmetric input stays
    in real arithmetic. The result is deterministic for a fixed input.
    """
    A = as_hermitian(A)
    n = A.shape[0]
    work = A.copy()
    V = np.eye(n, dtype=work.dtype)
    norm = np.linalg.norm(work)
    target = JACOBI_RTOL * norm
    is_complex = np.iscomplexobj(work)
    tiny = np.finfo(float).tiny

    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(work - np.diag(np.diag(work)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                a_pq = work[p, q]
                if abs(a_pq) <= tiny:
                    continue
                c, s, phase = _jacobi_pair(work[p, p].real, work[q, q].real, a_pq)
                if is_complex:
                    G = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                else:
                    G = np.array([[c, s * phase], [-s * phase, c]])
                idx = [p, q]
                work[:, idx] = work[:, idx] @ G
                work[idx, :] = G.conj().T @ work[idx, :]
                V[:, idx] = V[:, idx] @ G
                work[p, q] = work[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    w = np.diag(work).real.copy()
    order = np.argsort(w, kind="stable")
    return SpectralDecomposition(w[order], V[:, order])


def diag_decomposition(values) -> SpectralDecomposition:
    """Exact decomposition of ``diag(values)``."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    return SpectralDecomposition(values[order], np.eye(values.shape[0])[:, order], zero_rtol=0.0)


def _decomposition(A: MatrixLike) -> SpectralDecomposition:
    if isinstance(A, SpectralDecomposition):
        return A
    if isinstance(A, PsdWitness):
        return A.decomposition
    return eig_hermitian(A)


def _psd_decomposition(A: MatrixLike) -> SpectralDecomposition:
    if isinstance(A, PsdWitness):
        return A.decomposition
    dec = _decomposition(A)
    lam_min = float(dec.eigenvalues[0])
    # ||A||_F from the spectrum
    if lam_min < -PSD_RTOL * max(float(np.linalg.norm(dec.eigenvalues)), 1e-300):
        raise InputError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return dec


def as_psd(A: MatrixLike) -> PsdWitness:
    """Check positive semidefiniteness up to ``-1e-12 * ||A||_F``."""
    if isinstance(A, PsdWitness):
        return A
    dec = _psd_decomposition(A)
    M = as_hermitian(A) if isinstance(A, np.ndarray) else dec.matrix()
    return PsdWitness(M, float(dec.eigenvalues[0]), dec)


def frac_power(A: MatrixLike, s: float) -> np.ndarray:
    """Return ``A**s`` for PSD ``A`` with the conventions ``0**s = 0`` for all
    ``s >= 0`` (so ``s = 0`` gives the range projector).

    Negative ``s`` requires ``A`` to be positive definite.
    """
    dec = _psd_decomposition(A)
    lam = np.clip(dec.eigenvalues, 0.0, None)
    zero = dec.zero_mask()
    if s < 0 and np.any(zero):
        raise DomainError("negative power of a singular matrix")
    vals = np.zeros_like(lam)
    pos = ~zero
    vals[pos] = lam[pos] ** s
    return dec.apply(vals)


def complex_power(A: MatrixLike, z: complex) -> np.ndarray:
    """``A**z = sum_k exp(z log lam_k) v_k v_k*`` for positive definite ``A``."""
    dec = _psd_decomposition(A)
    if np.any(dec.zero_mask()):
        raise DomainError("complex power needs a positive definite matrix")
    vals = np.exp(complex(z) * np.log(dec.eigenvalues))
    V = dec.eigenvectors
    return (V * vals) @ V.conj().T


def mat_exp(H: MatrixLike) -> np.ndarray:
    dec = _decomposition(H)
    return dec.apply(np.exp(dec.eigenvalues))


def mat_log(X: MatrixLike) -> np.ndarray:
    dec = _psd_decomposition(X)
    if np.any(dec.zero_mask()) or dec.eigenvalues[0] <= 0:
        raise DomainError("matrix logarithm of a singular matrix")
    return dec.apply(np.log(dec.eigenvalues))


def schatten_norm(A, p: float) -> float:
    """Schatten p-norm ``(sum sigma_k**p)**(1/p)``; ``p = inf`` is the
    operator norm."""
    if not (p >= 1):
        raise InputError(f"Schatten exponent must be >= 1, got {p}")
    sigma = np.linalg.svd(_square(A), compute_uv=False)
    if np.isinf(p):
        return float(sigma[0])
    top = sigma[0]
    if top == 0:
        return 0.0
    return float(top * np.sum((sigma / top) ** p) ** (1.0 / p))


def hadamard(A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise InputError(f"shape mismatch {A.shape} vs {B.shape}")
    return A * B


def trace_product(matrices: Sequence[np.ndarray]):
    """``Tr[M1 M2 ... Mk]``."""
    if not matrices:
        raise InputError("empty product")
    mats = [_square(M) for M in matrices]
    n = mats[0].shape[0]
    if any(M.shape != (n, n) for M in mats):
        raise InputError("matrices in the product have different sizes")
    if len(mats) == 1:
        return np.trace(mats[0])
    # last multiplication only needs the diagonal
    head = reduce(np.matmul, mats[:-1])
    return np.einsum("ij,ji->", head, mats[-1])


def householder(u, v) -> np.ndarray:
    """Reflection ``I - 2 w w* / ||w||**2`` with ``w = u - v``; swaps the unit
    vectors ``u`` and ``v``."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise InputError("u and v must be vectors of equal length")
    for name, vec in (("u", u), ("v", v)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
            raise InputError(f"{name} is not a unit vector")
    w = u - v
    ww = np.vdot(w, w).real
    if ww <= 1e-28:
        raise InputError("u and v must be distinct")
    return np.eye(u.shape[0], dtype=w.dtype) - (2.0 / ww) * np.outer(w, w.conj())


def divided_difference_exp(lam_i, lam_j):
    """``(exp(lam_i) - exp(lam_j)) / (lam_i - lam_j)``, with the diagonal
    limit ``exp(lam)``.

    Evaluated as ``exp(m) * sinh(d/2) / (d/2)`` with midpoint ``m`` and gap
    ``d``, which has no cancellation; below ``|d| = 1e-7`` a four-term Taylor
    series replaces the ratio. Works elementwise on arrays.
    """
    li = np.asarray(lam_i, dtype=float)
    lj = np.asarray(lam_j, dtype=float)
    li, lj = np.broadcast_arrays(li, lj)
    out = np.zeros(li.shape)
    both_inf = np.isneginf(li) & np.isneginf(lj)
    one_inf = np.isneginf(li) ^ np.isneginf(lj)
    finite = ~(both_inf | one_inf)
    # exp(-inf) = 0 on one side: the quotient reduces to exp(finite)/inf = 0
    out[both_inf | one_inf] = 0.0
    m = (li[finite] + lj[finite]) / 2
    h = (li[finite] - lj[finite]) / 2
    small = np.abs(2 * h) <= TAYLOR_SWITCH
    ratio = np.empty_like(h)
    hs = h[small]
    ratio[small] = 1.0 + hs**2 / 6 + hs**4 / 120 + hs**6 / 5040
    hl = h[~small]
    ratio[~small] = np.sinh(hl) / hl
    out[finite] = np.exp(m) * ratio
    return out if out.ndim else float(out)


def exp_kernel_matrix(lam: np.ndarray) -> np.ndarray:
    """Matrix of divided differences of exp over all eigenvalue pairs."""
    lam = np.asarray(lam, dtype=float)
    return divided_difference_exp(lam[:, None], lam[None, :])


def log_mean(x, y):
    """Logarithmic mean ``(x - y) / (log x - log y)`` with ``L(x, x) = x`` and
    ``L(x, 0) = 0``; elementwise."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        return divided_difference_exp(np.log(x), np.log(y))
