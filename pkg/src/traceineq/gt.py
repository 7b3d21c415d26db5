"""Golden-Thompson interpolation ``f(u) = Tr[exp(H + (1-u)K) exp(uK)]``.

The derivative integral ``int_0^1 Tr[e^((1-t)H_u) K e^(t H_u) e^(uK)] dt`` is
evaluated in closed form in an eigenbasis of ``H_u = H + (1-u)K``: the
``(i, j)`` weight is the divided difference of ``exp`` at ``lam_i, lam_j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .matcore import (
    InputError,
    SpectralDecomposition,
    as_hermitian,
    eig_hermitian,
    exp_kernel_matrix,
)

MONOTONE_RTOL = 1e-10
STRICT_RTOL = 1e-13


def _pair(H, K) -> tuple[np.ndarray, np.ndarray]:
    H = as_hermitian(H)
    K = as_hermitian(K)
    if H.shape != K.shape:
        raise InputError(f"H and K differ in size: {H.shape} vs {K.shape}")
    return H, K


def _exp(dec: SpectralDecomposition, scale: float = 1.0) -> np.ndarray:
    return dec.apply(np.exp(scale * dec.eigenvalues))


def gt_f(H, K, u: float) -> float:
    """``Tr[exp(H + (1-u)K) exp(uK)]``."""
    H, K = _pair(H, K)
    dk = eig_hermitian(K)
    Hu = eig_hermitian(H + (1 - u) * K)
    return float(np.real(np.einsum("ij,ji->", _exp(Hu), _exp(dk, u))))


def _fprime(Hu: SpectralDecomposition, K: np.ndarray, EuK: np.ndarray) -> float:
    W = Hu.eigenvectors
    lam = Hu.eigenvalues
    Kt = W.conj().T @ K @ W
    Et = W.conj().T @ EuK @ W
    # Tr[e^(H_u) K e^(uK)] in the eigenbasis of H_u
    first = np.sum(np.exp(lam) * np.einsum("ij,ji->i", Kt, Et))
    second = np.einsum("ij,ij,ji->", Kt, exp_kernel_matrix(lam), Et)
    return float(np.real(first - second))


def gt_fprime(H, K, u: float) -> float:
    """Exact derivative of :func:`gt_f` in ``u``."""
    H, K = _pair(H, K)
    dk = eig_hermitian(K)
    return _fprime(eig_hermitian(H + (1 - u) * K), K, _exp(dk, u))


@dataclass(frozen=True)
class GTProfile:
    u_grid: np.ndarray
    f_values: np.ndarray
    fprime_values: np.ndarray
    monotone: bool
    min_derivative: float

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.f_values)))

    @property
    def golden_thompson_ok(self) -> bool:
        return bool(self.f_values[0] <= self.f_values[-1] + 1e-12 * self.scale)

    @property
    def strictly_increasing(self) -> bool:
        return self.min_derivative > STRICT_RTOL * self.scale


def gt_profile(H, K, n_points: int) -> GTProfile:
    """``f`` and ``f'`` on a uniform grid of ``n_points`` over ``[0, 1]``.

    Monotonicity is judged on the exact derivative at the grid points, with
    tolerance ``-1e-10 * max|f|``.
    """
    if n_points < 2:
        raise InputError("need at least two grid points")
    H, K = _pair(H, K)
    dk = eig_hermitian(K)
    grid = np.linspace(0.0, 1.0, n_points)
    f = np.empty(n_points)
    fp = np.empty(n_points)
    for k, u in enumerate(grid):
        Hu = eig_hermitian(H + (1 - u) * K)
        EuK = _exp(dk, u)
        f[k] = np.real(np.einsum("ij,ji->", _exp(Hu), EuK))
        fp[k] = _fprime(Hu, K, EuK)
    scale = float(np.max(np.abs(f)))
    min_d = float(fp.min())
    return GTProfile(grid, f, fp, min_d >= -MONOTONE_RTOL * scale, min_d)


def shift_check(H, K, a: float, b: float, u_grid: Iterable[float]) -> bool:
    """``f_{H+aI, K+bI}(u) = e^(a+b) f_{H,K}(u)`` to 1e-12 relative."""
    H, K = _pair(H, K)
    eye = np.eye(H.shape[0])
    factor = np.exp(a + b)
    for u in u_grid:
        base = gt_f(H, K, u)
        shifted = gt_f(H + a * eye, K + b * eye, u)
        if abs(shifted - factor * base) > 1e-12 * abs(factor * base):
            return False
    return True


def series_term(Hu, K, m: int) -> float:
    """``Tr[e^(H_u) K^(m+1)] - int_0^1 Tr[e^((1-t)H_u) K e^(t H_u) K^m] dt``.

    Each term of the power series for ``f'(u)``; nonnegative when ``K`` is
    diagonal and nonnegative and ``H_u`` has nonnegative off-diagonal entries.
    """
    Hu = as_hermitian(Hu)
    K = as_hermitian(K)
    dec = eig_hermitian(Hu)
    W, lam = dec.eigenvectors, dec.eigenvalues
    Km = np.linalg.matrix_power(K, m)
    first = np.real(np.trace(_exp(dec) @ Km @ K))
    Kt = W.conj().T @ K @ W
    Kmt = W.conj().T @ Km @ W
    second = np.real(np.einsum("ij,ij,ji->", Kt, exp_kernel_matrix(lam), Kmt))
    return float(first - second)


# -- graphs -----------------------------------------------------------------


@dataclass(frozen=True)
class GraphSpec:
    """Simple undirected graph on vertices ``0 .. n_vertices-1``."""

    n_vertices: int
    edges: frozenset

    def __init__(self, n_vertices: int, edges: Iterable[Sequence[int]] = ()):
        if n_vertices < 1:
            raise InputError("graph needs at least one vertex")
        norm = set()
        for e in edges:
            x, y = (int(v) for v in e)
            if x == y:
                raise InputError(f"self-loop at vertex {x}")
            if not (0 <= x < n_vertices and 0 <= y < n_vertices):
                raise InputError(f"edge ({x}, {y}) leaves the vertex set")
            norm.add((min(x, y), max(x, y)))
        object.__setattr__(self, "n_vertices", int(n_vertices))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def path(cls, n: int) -> "GraphSpec":
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n: int) -> "GraphSpec":
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def cycle(cls, n: int) -> "GraphSpec":
        return cls(n, [(i, (i + 1) % n) for i in range(n)])


def graph_laplacian(g: GraphSpec) -> np.ndarray:
    """Degree matrix minus adjacency matrix."""
    L = np.zeros((g.n_vertices, g.n_vertices))
    for x, y in g.edges:
        L[x, y] -= 1.0
        L[y, x] -= 1.0
        L[x, x] += 1.0
        L[y, y] += 1.0
    return L


def gt_graph_demo(g: GraphSpec, potential, n_points: int = 101) -> GTProfile:
    """Profile of ``Tr[exp(-(L + (1-u)V)) exp(-uV)]`` with ``L`` the graph
    Laplacian and ``V = diag(potential)``, i.e. ``H = -L``, ``K = -V``."""
    v = np.asarray(potential, dtype=float)
    if v.shape != (g.n_vertices,):
        raise InputError("potential must have one value per vertex")
    return gt_profile(-graph_laplacian(g), -np.diag(v), n_points)
