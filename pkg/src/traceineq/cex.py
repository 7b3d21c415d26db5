"""Three-by-three counterexamples built from a Householder reflection.

``X = R U diag(a, b, 1) U R^T`` and ``Y = diag(c, d, 1)``, with ``U`` the
reflection swapping ``e_3`` and ``(e_1 + e_2)/sqrt(2)`` and ``R`` a rotation
by ``x`` in the 1-3 plane. Every power of ``X`` is formed from this
factorisation, which keeps eigenvalues as small as ``1e-19`` exact; a generic
eigensolver cannot separate them from zero next to a unit eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .aho import aho_trace, closed_grid, half_trace, m_profile, tr_xy
from .matcore import (
    DomainError,
    InputError,
    SpectralDecomposition,
    diag_decomposition,
    eig_hermitian,
    householder,
    log_mean,
)

SQRT2 = np.sqrt(2.0)
GENERIC_MIN_EIGENVALUE = 1e-6


class PrecisionRegimeError(RuntimeError):
    """A generic eigensolver was requested where it cannot be accurate."""


@dataclass(frozen=True)
class CexParams:
    a: float
    b: float
    x: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise InputError("a and b must be positive")
        if not (self.c >= 0 and self.d >= 0):
            raise InputError("c and d must be nonnegative")

    def swapped(self) -> "CexParams":
        return CexParams(self.b, self.a, self.x, self.c, self.d)


def reflection_u() -> np.ndarray:
    u = np.array([0.0, 0.0, 1.0])
    v = np.array([1.0, 1.0, 0.0]) / SQRT2
    return householder(u, v)


def rotation_13(x: float) -> np.ndarray:
    c, s = np.cos(x), np.sin(x)
    return np.array([[c, 0.0, -s], [0.0, 1.0, 0.0], [s, 0.0, c]])


@dataclass(frozen=True)
class CexInstance:
    params: CexParams
    U: np.ndarray
    R: np.ndarray

    @property
    def A_diag(self) -> np.ndarray:
        return np.array([self.params.a, self.params.b, 1.0])

    @property
    def Y_diag(self) -> np.ndarray:
        return np.array([self.params.c, self.params.d, 1.0])

    @cached_property
    def Q(self) -> np.ndarray:
        """Orthogonal ``R U``; its columns are eigenvectors of ``X``."""
        return self.R @ self.U

    @property
    def X(self) -> np.ndarray:
        return x_power(self, 1.0)

    @property
    def Y(self) -> np.ndarray:
        return np.diag(self.Y_diag)

    @cached_property
    def x_decomposition(self) -> SpectralDecomposition:
        lam = self.A_diag
        order = np.argsort(lam, kind="stable")
        return SpectralDecomposition(lam[order], self.Q[:, order], zero_rtol=0.0)

    @cached_property
    def y_decomposition(self) -> SpectralDecomposition:
        return diag_decomposition(self.Y_diag)

    @property
    def log_x(self) -> np.ndarray:
        """``log X`` in factored form."""
        return (self.Q * np.log(self.A_diag)) @ self.Q.T

    def generic_x_decomposition(self) -> SpectralDecomposition:
        """Diagonalise the assembled ``X`` with the Jacobi solver.

        Refused when ``min(a, b) < 1e-6``: below that the small eigenvalues
        are lost to roundoff.
        """
        if min(self.params.a, self.params.b) < GENERIC_MIN_EIGENVALUE:
            raise PrecisionRegimeError(
                f"generic eigensolver cannot resolve eigenvalue {min(self.params.a, self.params.b):g}"
            )
        return eig_hermitian(self.X)


def build(params: CexParams) -> CexInstance:
    return CexInstance(params, reflection_u(), rotation_13(params.x))


def example_4_1() -> CexInstance:
    """Violates the upper bound at ``s = t = 0.79``."""
    return build(CexParams(a=1e-10, b=1e-19, x=1e-5, c=1e-10, d=0.0))


def example_4_2() -> CexInstance:
    """Same as :func:`example_4_1` with ``a`` and ``b`` swapped; the trace goes
    negative near ``s = t = 0.98``."""
    return build(example_4_1().params.swapped())


def _pow0(values: np.ndarray, t: float) -> np.ndarray:
    out = np.zeros_like(values)
    pos = values > 0
    out[pos] = values[pos] ** t
    return out


def x_power(inst: CexInstance, t: float) -> np.ndarray:
    """``X^t = R U diag(a^t, b^t, 1) U R^T``."""
    if t < 0:
        raise DomainError("only nonnegative powers are supported")
    Q = inst.Q
    return (Q * _pow0(inst.A_diag, t)) @ Q.T


def y_power(inst: CexInstance, t: float) -> np.ndarray:
    return np.diag(_pow0(inst.Y_diag, t))


def x_power_offdiag_closed_form(inst: CexInstance, t: float) -> tuple[float, float]:
    """``(X^t_13, X^t_23)`` from the explicit trigonometric formulas."""
    p = inst.params
    alpha = (p.a**t + p.b**t) / 4
    beta = SQRT2 / 4 * (p.a**t - p.b**t)
    c, s = np.cos(p.x), np.sin(p.x)
    x13 = (c * c - s * s) * beta + s * c * (0.5 - alpha)
    x23 = -c * beta + s * (0.5 - alpha)
    return float(x13), float(x23)


def aho_trace_structured(inst: CexInstance, s: float, t: float) -> float:
    """``Tr[X^s Y^t X^(1-s) Y^(1-t)]`` for the instance; real since X, Y are."""
    Xs, Xc = x_power(inst, s), x_power(inst, 1 - s)
    ys, yc = _pow0(inst.Y_diag, t), _pow0(inst.Y_diag, 1 - t)
    # Y powers are diagonal: Tr[Xs Ys Xc Yc] = sum_ij Xs_ij ys_j Xc_ji yc_i
    return float(np.einsum("ij,j,ji,i->", Xs, ys, Xc, yc))


def cancellation_ratio(inst: CexInstance, t_grid=None) -> float:
    """``max_t |X^t_13 + X^t_23| / max_t (|X^t_13| + |X^t_23|)``."""
    if t_grid is None:
        t_grid = closed_grid(0.0, 1.0, 0.01)
    sums, mags = [], []
    for t in t_grid:
        Xt = x_power(inst, t)
        sums.append(abs(Xt[0, 2] + Xt[1, 2]))
        mags.append(abs(Xt[0, 2]) + abs(Xt[1, 2]))
    return max(sums) / max(mags)


def zero_crossing(inst: CexInstance, lo: float, hi: float, xtol: float = 1e-12) -> float:
    """Bisect ``g(tau) = Tr[X^tau Y^tau X^(1-tau) Y^(1-tau)]`` on ``[lo, hi]``."""
    g_lo = aho_trace_structured(inst, lo, lo)
    g_hi = aho_trace_structured(inst, hi, hi)
    if g_lo == 0:
        return float(lo)
    if g_hi == 0:
        return float(hi)
    if np.sign(g_lo) == np.sign(g_hi):
        raise DomainError(f"no sign change on [{lo}, {hi}]: g = {g_lo:.3e}, {g_hi:.3e}")
    while hi - lo >= xtol:
        mid = 0.5 * (lo + hi)
        g_mid = aho_trace_structured(inst, mid, mid)
        if g_mid == 0:
            return mid
        if np.sign(g_mid) == np.sign(g_lo):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gt_cex_derivative(inst: CexInstance, d: float | None = None) -> float:
    """``f'(1)`` for ``f(u) = Tr[exp(H + (1-u)K) exp(uK)]`` with ``K = log X``
    and ``H = log Y``.

    With ``H`` diagonal the derivative is
    ``sum_ij K_ij X_ji (y_i - L(y_i, y_j))`` where ``L`` is the logarithmic
    mean, which tends to 0 when either argument does, so ``d = 0`` is exact.
    Passing ``d`` overrides the instance's ``d`` (for regularised checks).
    """
    y = inst.Y_diag.copy()
    if d is not None:
        y[1] = d
    if y[0] == 0 and y[1] == 0:
        raise DomainError("c and d cannot both vanish")
    K = inst.log_x
    X = x_power(inst, 1.0)
    L = log_mean(y[:, None], y[None, :])
    return float(np.sum(K * X.T * (y[:, None] - L)))


def cex_operators(inst: CexInstance, d_floor: float = 1e-30) -> tuple[np.ndarray, np.ndarray]:
    """``(H, K) = (log Y, log X)`` with zero entries of ``Y`` raised to
    ``d_floor`` so that both logarithms are finite."""
    if d_floor <= 0:
        raise DomainError("d_floor must be positive")
    return np.diag(np.log(np.maximum(inst.Y_diag, d_floor))), inst.log_x


# -- the tridiagonal example ------------------------------------------------


def tridiag_sqrt() -> np.ndarray:
    r = SQRT2
    return np.array([[2.0, r, 0.0], [r, 2.0, r], [0.0, r, 2.0]])


def tridiag_decomposition() -> SpectralDecomposition:
    """Exact spectrum of ``X = tridiag_sqrt()^2``: eigenvalues 0, 4, 16."""
    v0 = np.array([1.0, -SQRT2, 1.0]) / 2
    v4 = np.array([1.0, 0.0, -1.0]) / SQRT2
    v16 = np.array([1.0, SQRT2, 1.0]) / 2
    return SpectralDecomposition(np.array([0.0, 4.0, 16.0]), np.column_stack([v0, v4, v16]), zero_rtol=0.0)


def h_shape(s):
    return 4.0 ** (s - 0.5) + 4.0 ** (0.5 - s)


def ce5_trace(a: float, b: float, s: float, t: float) -> float:
    """Closed form of ``Tr[X^(1-s) Y^(1-t) X^s Y^t]`` for ``Y = diag(a, 0, b)``."""
    mixed = a**t * b ** (1 - t) + a ** (1 - t) * b**t
    return 2 * (a + b + mixed) + h_shape(s) * (a + b - mixed)


@dataclass
class TridiagReport:
    m_identities_ok: bool
    max_m_error: float
    trace_formula_ok: bool
    max_trace_error: float
    convex_symmetric_ok: bool
    bounds_ok: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.m_identities_ok and self.trace_formula_ok and self.convex_symmetric_ok and self.bounds_ok


def tridiag_demo(ab_pairs=((1.0, 2.0), (0.1, 3.0), (5.0, 0.2)), step: float = 0.05, tol: float = 1e-12) -> TridiagReport:
    """Check the tridiagonal worked example on the grid ``{0, step, ..., 1}``.

    Covers the ``M(s)`` identities, the closed-form trace with
    ``Y = diag(a, 0, b)``, convexity and symmetry in ``s`` about 1/2, and
    both two-matrix bounds on the whole grid.
    """
    dec = tridiag_decomposition()
    grid = closed_grid(0.0, 1.0, step)
    failures = []

    max_m = 0.0
    for s in grid:
        M = m_profile(dec, np.eye(3), s).m_matrix
        h = h_shape(s)
        for (i, j), want in {(0, 2): 2 - h, (0, 0): 2 + h, (2, 2): 2 + h, (0, 1): 2.0}.items():
            err = abs(M[i, j] - want)
            max_m = max(max_m, err)
            if err > tol * max(1.0, abs(want)):
                failures.append(("M", s, (i, j), float(M[i, j]), float(want)))
    m_ok = not any(f[0] == "M" for f in failures)

    max_tr = 0.0
    convex_ok = True
    bounds_ok = True
    for a, b in ab_pairs:
        Ydec = diag_decomposition([a, 0.0, b])
        upper = tr_xy(dec, Ydec)
        lower = half_trace(dec, Ydec)
        table = np.empty((len(grid), len(grid)))
        for i, s in enumerate(grid):
            for j, t in enumerate(grid):
                # Tr[X^(1-s) Y^(1-t) X^s Y^t] = F(1-s, 1-t) by cyclicity
                val = aho_trace(dec, Ydec, 1 - s, 1 - t)
                table[i, j] = val.real
                want = ce5_trace(a, b, s, t)
                err = abs(val - want)
                max_tr = max(max_tr, err)
                if err > tol * max(1.0, abs(want)):
                    failures.append(("ce5", (a, b), s, t, float(val.real), want))
                btol = tol * max(1.0, upper)
                if not (lower - btol <= abs(val) <= upper + btol):
                    bounds_ok = False
                    failures.append(("bounds", (a, b), s, t, float(val.real)))
        for j, t in enumerate(grid):
            if t in (0.0, 1.0):
                continue
            col = table[:, j]
            if np.max(np.abs(col - col[::-1])) > tol * max(1.0, np.max(np.abs(col))):
                convex_ok = False
                failures.append(("symmetry", (a, b), t))
            if np.min(col[:-2] - 2 * col[1:-1] + col[2:]) < -tol * max(1.0, np.max(np.abs(col))):
                convex_ok = False
                failures.append(("convexity", (a, b), t))
            mid = grid.index(0.5)
            if np.argmin(col) != mid and col.min() < col[mid] - tol * max(1.0, abs(col[mid])):
                convex_ok = False
                failures.append(("minimum", (a, b), t))
    tr_ok = not any(f[0] == "ce5" for f in failures)
    return TridiagReport(m_ok, max_m, tr_ok, max_tr, convex_ok, bounds_ok, failures)
