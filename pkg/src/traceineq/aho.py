"""The two-parameter trace functional Tr[X^s Y^t X^(1-s) Y^(1-t)] and the
inequalities around it.

Matrix arguments may be arrays, :class:`~traceineq.matcore.SpectralDecomposition`
or :class:`~traceineq.matcore.PsdWitness`; passing a decomposition avoids
re-diagonalising and lets callers supply exact spectra.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .matcore import (
    DomainError,
    InputError,
    MatrixLike,
    SpectralDecomposition,
    as_hermitian,
    as_psd,
    complex_power,
    eig_hermitian,
    frac_power,
    hadamard,
    schatten_norm,
    symmetrize,
    trace_product,
)

HOLDS_RTOL = 1e-12
ENTRY_RTOL = 1e-12
BD_RTOL = 1e-14
LIMIT_TOL = 1e-6


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    VIOLATED = "violated"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class ExponentPair:
    s: float
    t: float

    @property
    def aho_region(self) -> bool:
        return 0.5 <= self.s <= 1 and 0.5 <= self.t <= 1

    @property
    def theorem_region(self) -> bool:
        return self.aho_region and self.s + self.t <= 1.5 + 1e-12


@dataclass(frozen=True)
class BoundReport:
    """One inequality ``left <= right`` evaluated numerically.

    ``guaranteed`` marks checks whose validity is a theorem for the given
    inputs; a violation there is a numerical-integrity failure rather than a
    counterexample.
    """

    name: str
    exponents: tuple
    trace_value: complex
    left: float
    right: float
    margin: float
    verdict: Verdict
    guaranteed: bool = False

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def integrity_failure(self) -> bool:
        return self.guaranteed and self.verdict is Verdict.VIOLATED


def verdict_for(left: float, right: float) -> Verdict:
    margin = right - left
    tol = HOLDS_RTOL * max(abs(left), abs(right), 1.0)
    return Verdict.HOLDS if margin >= -tol else Verdict.VIOLATED


def _report(name, exponents, trace_value, left, right, guaranteed=False) -> BoundReport:
    left = float(left)
    right = float(right)
    return BoundReport(
        name=name,
        exponents=tuple(float(e) for e in exponents),
        trace_value=complex(trace_value),
        left=left,
        right=right,
        margin=right - left,
        verdict=verdict_for(left, right),
        guaranteed=guaranteed,
    )


def _not_applicable(name, exponents) -> BoundReport:
    nan = float("nan")
    return BoundReport(name, tuple(exponents), complex(nan), nan, nan, nan, Verdict.NOT_APPLICABLE)


class _Powers:
    """Memoised fractional powers of one PSD matrix."""

    def __init__(self, A: MatrixLike):
        self.dec = as_psd(A).decomposition
        self._cache: dict[float, np.ndarray] = {}

    def __call__(self, s: float) -> np.ndarray:
        key = float(s)
        if key not in self._cache:
            self._cache[key] = frac_power(self.dec, key)
        return self._cache[key]


def _powers(A) -> _Powers:
    return A if isinstance(A, _Powers) else _Powers(A)


def _real_trace(*mats) -> float:
    return float(np.real(trace_product(list(mats))))


def aho_trace(X: MatrixLike, Y: MatrixLike, s: float, t: float) -> complex:
    """``Tr[X^s Y^t X^(1-s) Y^(1-t)]`` (complex in general)."""
    px, py = _powers(X), _powers(Y)
    return complex(trace_product([px(s), py(t), px(1 - s), py(1 - t)]))


def tr_xy(X: MatrixLike, Y: MatrixLike) -> float:
    px, py = _powers(X), _powers(Y)
    return _real_trace(px(1.0), py(1.0))


def half_trace(X: MatrixLike, Y: MatrixLike) -> float:
    """``Tr[X^(1/2) Y^(1/2) X^(1/2) Y^(1/2)]``, real and nonnegative."""
    px, py = _powers(X), _powers(Y)
    return _real_trace(px(0.5), py(0.5), px(0.5), py(0.5))


def aho_upper_check(X: MatrixLike, Y: MatrixLike, s: float, t: float) -> BoundReport:
    """``|Tr[X^s Y^t X^(1-s) Y^(1-t)]| <= Tr[XY]``."""
    px, py = _powers(X), _powers(Y)
    val = aho_trace(px, py, s, t)
    pair = ExponentPair(s, t)
    return _report("aho-upper", (s, t), val, abs(val), tr_xy(px, py), guaranteed=pair.theorem_region)


def aho_lower_check(X: MatrixLike, Y: MatrixLike, s: float, t: float) -> BoundReport:
    """``Tr[X^(1/2) Y^(1/2) X^(1/2) Y^(1/2)] <= |Tr[X^s Y^t X^(1-s) Y^(1-t)]|``."""
    px, py = _powers(X), _powers(Y)
    val = aho_trace(px, py, s, t)
    return _report("aho-lower", (s, t), val, half_trace(px, py), abs(val))


def four_matrix_bound(X, Y, Z, W, s: float, t: float) -> BoundReport:
    """``|Tr[X^t Y^s Z^(1-t) W^(1-s)]| <= Tr[XY]^(t+s-1) Tr[YZ]^(1-t) Tr[WX]^(1-s)``
    for ``1/2 <= s, t`` and ``s + t <= 3/2``."""
    if not ExponentPair(s, t).theorem_region:
        return _not_applicable("four-matrix", (s, t))
    px, py, pz, pw = (_powers(M) for M in (X, Y, Z, W))
    val = complex(trace_product([px(t), py(s), pz(1 - t), pw(1 - s)]))
    xy = max(tr_xy(px, py), 0.0)
    yz = max(tr_xy(py, pz), 0.0)
    wx = max(tr_xy(pw, px), 0.0)
    right = xy ** (t + s - 1) * yz ** (1 - t) * wx ** (1 - s)
    return _report("four-matrix", (s, t), val, abs(val), right, guaranteed=True)


def lieb_thirring_check(A: MatrixLike, B: MatrixLike, r: float) -> BoundReport:
    """Compare ``Tr[(B^(1/2) A B^(1/2))^r]`` with ``Tr[A^r B^r]``.

    The direction is ``<=`` for ``r >= 1`` and ``>=`` for ``0 < r <= 1``; the
    report is phrased so that ``holds`` means the correct direction.
    """
    if not r > 0:
        raise InputError("Lieb-Thirring exponent must be positive")
    pa, pb = _powers(A), _powers(B)
    half = pb(0.5)
    C = symmetrize(half @ pa(1.0) @ half)
    lam = np.clip(eig_hermitian(C).eigenvalues, 0.0, None)
    sandwich = float(np.sum(lam[lam > 0] ** r))
    product = _real_trace(pa(r), pb(r))
    if r >= 1:
        return _report("lieb-thirring", (r,), sandwich, sandwich, product, guaranteed=True)
    return _report("araki", (r,), sandwich, product, sandwich, guaranteed=True)


def holder_check(factors: Sequence[np.ndarray], exponents: Sequence[float]) -> BoundReport:
    """``|Tr[A_1 ... A_k]| <= prod ||A_k||_{p_k}`` with ``sum 1/p_k = 1``."""
    if len(factors) != len(exponents) or not factors:
        raise InputError("need one exponent per factor")
    if any(not p >= 1 for p in exponents):
        raise InputError("Hölder exponents must be >= 1")
    if abs(sum(1.0 / p for p in exponents) - 1.0) > 1e-12:
        raise InputError("reciprocal exponents must sum to 1")
    val = complex(trace_product(list(factors)))
    right = float(np.prod([schatten_norm(A, p) for A, p in zip(factors, exponents)]))
    return _report("holder", exponents, val, abs(val), right, guaranteed=True)


# -- Hadamard profile -------------------------------------------------------


@dataclass(frozen=True)
class HadamardProfile:
    """``M_ij(s) = (X^s)_ij (X^(1-s))_ji`` in a fixed orthonormal basis."""

    s: float
    m_matrix: np.ndarray

    def offdiag_min(self) -> float:
        M = self.m_matrix.real
        n = M.shape[0]
        mask = ~np.eye(n, dtype=bool)
        return float(M[mask].min()) if n > 1 else 0.0


def _check_basis(basis) -> np.ndarray:
    B = np.asarray(basis)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise InputError("basis must be a square matrix")
    if np.linalg.norm(B.conj().T @ B - np.eye(B.shape[0])) > 1e-12 * B.shape[0]:
        raise InputError("basis is not orthonormal")
    return B


def m_profile(X: MatrixLike, basis, s: float) -> HadamardProfile:
    B = _check_basis(basis)
    px = _powers(X)
    Xs = B.conj().T @ px(s) @ B
    Xc = B.conj().T @ px(1 - s) @ B
    M = hadamard(Xs, Xc.T)
    if not np.iscomplexobj(M) or not np.any(M.imag):
        M = M.real
    return HadamardProfile(float(s), M)


@dataclass
class ConlemResult:
    condition_holds: bool
    negative_entries: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    basis: np.ndarray | None = None

    @property
    def sandwich_holds(self) -> bool:
        return all(r.holds for r in self.reports)


def conlem_check(X: MatrixLike, Y: MatrixLike, s_grid: Iterable[float], t_grid: Iterable[float]) -> ConlemResult:
    """Test the entrywise sign condition on ``M(s)`` in an eigenbasis of ``Y``
    and, when it holds for every ``s``, evaluate the two-sided sandwich
    ``Tr[X^½Y^½X^½Y^½] <= |Tr[X^sY^tX^(1-s)Y^(1-t)]| <= Tr[XY]``.

    ``negative_entries`` lists ``(s, i, j, M_ij)`` for failing entries.
    """
    px, py = _powers(X), _powers(Y)
    basis = py.dec.eigenvectors
    s_grid = [float(s) for s in s_grid]
    t_grid = [float(t) for t in t_grid]
    bad = []
    for s in s_grid:
        M = m_profile(px, basis, s).m_matrix
        tol = ENTRY_RTOL * max(1.0, float(np.max(np.abs(M))))
        re = np.real(M)
        im = np.imag(M) if np.iscomplexobj(M) else np.zeros_like(re)
        for i, j in zip(*np.nonzero((re < -tol) | (np.abs(im) > tol))):
            bad.append((s, int(i), int(j), complex(M[i, j])))
    result = ConlemResult(condition_holds=not bad, negative_entries=bad, basis=basis)
    if bad:
        return result
    lower = half_trace(px, py)
    upper = tr_xy(px, py)
    for s in s_grid:
        for t in t_grid:
            val = aho_trace(px, py, s, t)
            guaranteed = 0.5 <= t <= 1
            result.reports.append(_report("conlem-lower", (s, t), val, lower, abs(val), guaranteed))
            result.reports.append(_report("conlem-upper", (s, t), val, abs(val), upper, guaranteed))
    return result


# -- positivity of semigroups and resolvents --------------------------------


@dataclass(frozen=True)
class OffDiagCheck:
    ok: bool
    witness: tuple | None = None  # (i, j, H_ij), 0-based

    def __bool__(self) -> bool:
        return self.ok


def bd_offdiag_check(H) -> OffDiagCheck:
    """True iff every off-diagonal entry of ``H`` is real and ``<= 1e-14 ||H||_F``."""
    H = as_hermitian(H)
    n = H.shape[0]
    tol = BD_RTOL * np.linalg.norm(H)
    mask = ~np.eye(n, dtype=bool)
    re = np.real(H)
    im = np.imag(H) if np.iscomplexobj(H) else np.zeros_like(re)
    excess = np.where(mask, np.maximum(re, np.abs(im)), -np.inf)
    if n == 1 or excess.max() <= tol:
        return OffDiagCheck(True)
    i, j = np.unravel_index(np.argmax(excess), excess.shape)
    i, j = (int(i), int(j)) if i < j else (int(j), int(i))
    return OffDiagCheck(False, (i, j, complex(H[i, j]) if np.iscomplexobj(H) else float(H[i, j])))


@dataclass(frozen=True)
class PositivityReport:
    applicable: bool
    ok: bool
    min_entry: float = float("nan")
    worst_parameter: float = float("nan")
    limit_error: float = float("nan")
    limit_ok: bool = True


def _min_scaled_entry(M: np.ndarray) -> tuple[float, float]:
    M = np.real(M)
    return float(M.min()), float(np.max(np.abs(M)))


def semigroup_positivity(H, s_grid: Iterable[float]) -> PositivityReport:
    """Check that ``exp(-sH)`` is entrywise nonnegative for each ``s``."""
    if not bd_offdiag_check(H):
        return PositivityReport(applicable=False, ok=False)
    dec = eig_hermitian(H)
    worst, worst_s, ok = np.inf, float("nan"), True
    for s in s_grid:
        E = dec.apply(np.exp(-float(s) * dec.eigenvalues))
        lo, scale = _min_scaled_entry(E)
        if lo < -ENTRY_RTOL * scale:
            ok = False
        if lo < worst:
            worst, worst_s = lo, float(s)
    return PositivityReport(True, ok, worst, worst_s)


def resolvent_limit_error(H, s: float, n: int = 2**16) -> float:
    """Entrywise distance between ``(I + (s/n) H)^(-n)`` and ``exp(-sH)``,
    relative to the largest entry of ``exp(-sH)``.

    The leading error is ``(s lam)^2 / (2n)`` per eigenvalue, so at
    ``n = 2**16`` the result stays below ``1e-6`` once ``s ||H|| <= 0.36``.
    """
    H = as_hermitian(H)
    dim = H.shape[0]
    R = np.linalg.inv(np.eye(dim) + (s / n) * H)
    if n & (n - 1) == 0:
        for _ in range(n.bit_length() - 1):
            R = R @ R
    else:
        R = np.linalg.matrix_power(R, n)
    dec = eig_hermitian(H)
    E = dec.apply(np.exp(-s * dec.eigenvalues))
    return float(np.max(np.abs(R - E)) / np.max(np.abs(E)))


def resolvent_positivity(H, lam: float, n_powers: int, limit_s: float | None = None,
                         limit_n: int = 2**16) -> PositivityReport:
    """Entrywise positivity of ``(I + lam H)^(-k)`` for ``k = 1..n_powers``,
    plus convergence of ``(I + (s/n)H)^(-n)`` to ``exp(-sH)`` with
    ``s = limit_s`` (defaults to ``lam``)."""
    if not bd_offdiag_check(H):
        return PositivityReport(applicable=False, ok=False)
    H = as_hermitian(H)
    dim = H.shape[0]
    shifted = np.eye(dim) + lam * H
    if np.linalg.cond(shifted) > 1e12:
        raise DomainError("I + lam*H is singular")
    R = np.linalg.inv(shifted)
    P = np.eye(dim)
    worst, worst_k, ok = np.inf, float("nan"), True
    for k in range(1, n_powers + 1):
        P = P @ R
        lo, scale = _min_scaled_entry(P)
        if lo < -ENTRY_RTOL * scale:
            ok = False
        if lo < worst:
            worst, worst_k = lo, float(k)
    err = resolvent_limit_error(H, lam if limit_s is None else limit_s, limit_n)
    return PositivityReport(True, ok, worst, worst_k, err, err <= LIMIT_TOL)


# -- small-coupling expansion -----------------------------------------------


@dataclass(frozen=True)
class Expansion:
    """``exact`` against ``predicted = Tr[XY] + s t a^2 Tr[[H,K]^2]``.

    ``quartic`` is ``(1/2) s t (1-s)(1-t) a^4 Tr[[H,K]^2]``, the leading
    behaviour of ``exact - Tr[XY]``; the quadratic term in ``predicted`` does
    not actually appear in ``exact``.
    """

    exact: float
    predicted: float
    residual: float
    tr_xy: float
    commutator_square: float
    quartic: float


def _contraction(H) -> SpectralDecomposition:
    dec = eig_hermitian(H)
    norm = float(np.max(np.abs(dec.eigenvalues)))
    if norm > 1:
        dec = SpectralDecomposition(dec.eigenvalues / norm, dec.eigenvectors, dec.zero_rtol)
    return dec


def _exp_power(dec: SpectralDecomposition, z) -> np.ndarray:
    """``exp(z H)`` from the decomposition of ``H``."""
    V = dec.eigenvectors
    return (V * np.exp(z * dec.eigenvalues)) @ V.conj().T


def second_order_expansion(H, K, alpha: float, s: float, t: float) -> Expansion:
    """Evaluate ``Tr[X^(1-s) Y^(1-t) X^s Y^t]`` for ``X = e^(aH)``, ``Y = e^(aK)``.

    ``H`` and ``K`` are rescaled to unit operator norm if larger. Powers are
    taken as ``e^(s a H)`` directly rather than by powering ``X``.
    """
    dh, dk = _contraction(H), _contraction(K)
    Hn, Kn = dh.matrix(), dk.matrix()
    X1, Y1 = _exp_power(dh, alpha), _exp_power(dk, alpha)
    exact = _real_trace(_exp_power(dh, (1 - s) * alpha), _exp_power(dk, (1 - t) * alpha),
                        _exp_power(dh, s * alpha), _exp_power(dk, t * alpha))
    txy = _real_trace(X1, Y1)
    C = Hn @ Kn - Kn @ Hn
    c2 = float(np.real(np.trace(C @ C)))
    predicted = txy + s * t * alpha**2 * c2
    quartic = 0.5 * s * t * (1 - s) * (1 - t) * alpha**4 * c2
    return Expansion(exact, predicted, exact - predicted, txy, c2, quartic)


def imaginary_exponent_trace(H, K, alpha: float, s: float, t: float) -> tuple[complex, float]:
    """``(Tr[X^(1-it) Y^(1-is) X^(it) Y^(is)], Tr[XY])`` with ``X = e^(aH)``,
    ``Y = e^(aK)`` (``H``, ``K`` rescaled to contractions)."""
    dh, dk = _contraction(H), _contraction(K)
    X = SpectralDecomposition(np.exp(alpha * dh.eigenvalues), dh.eigenvectors, 0.0)
    Y = SpectralDecomposition(np.exp(alpha * dk.eigenvalues), dk.eigenvectors, 0.0)
    val = trace_product([complex_power(X, 1 - 1j * t), complex_power(Y, 1 - 1j * s),
                         complex_power(X, 1j * t), complex_power(Y, 1j * s)])
    return complex(val), _real_trace(X.matrix(), Y.matrix())


# -- three-by-three sign structure ------------------------------------------


def _real_psd(X) -> _Powers:
    px = _powers(X)
    if np.iscomplexobj(px.dec.eigenvectors) and np.any(px.dec.eigenvectors.imag):
        raise InputError("expected a real matrix")
    return px


def oct_quadratic_form(X: MatrixLike, s: float, y) -> float:
    """``sum_ij M_ij(s) (y_i - y_j)^2`` in the natural basis; nonnegative for
    real PSD ``X`` and ``0 < s < 1``."""
    px = _real_psd(X)
    M = m_profile(px, np.eye(px.dec.n), s).m_matrix.real
    y = np.asarray(y, dtype=float)
    diff = y[:, None] - y[None, :]
    return float(np.sum(M * diff**2))


@dataclass
class NegativityReport:
    ok: bool
    rows: list  # (s, (M12, M13, M23), number of negative entries)


def at_most_one_negative(X: MatrixLike, s_grid: Iterable[float]) -> NegativityReport:
    """For real 3x3 PSD ``X``: at most one of ``M_12, M_13, M_23`` is negative."""
    px = _real_psd(X)
    if px.dec.n != 3:
        raise InputError("at_most_one_negative needs a 3x3 matrix")
    rows, ok = [], True
    for s in s_grid:
        M = m_profile(px, np.eye(3), s).m_matrix.real
        tol = ENTRY_RTOL * max(1.0, float(np.max(np.abs(M))))
        upper = (M[0, 1], M[0, 2], M[1, 2])
        count = sum(v < -tol for v in upper)
        ok &= count <= 1
        rows.append((float(s), tuple(float(v) for v in upper), int(count)))
    return NegativityReport(ok, rows)


# -- grid sweep -------------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    s: float
    t: float
    trace: complex
    tr_xy: float
    upper: BoundReport
    lower: BoundReport


def closed_grid(lo: float, hi: float, step: float) -> list[float]:
    """``lo, lo+step, ...`` up to and including ``hi``, rounded to 12 decimals."""
    k = int(np.floor((hi - lo) / step + 1e-9))
    pts = [round(lo + i * step, 12) for i in range(k + 1)]
    if pts[-1] < hi - 1e-12:
        pts.append(float(hi))
    return pts


def scan(X: MatrixLike, Y: MatrixLike, grid_step: float) -> list[ScanRow]:
    """Upper and lower checks on the closed grid over ``[1/2, 1]^2``; ``s``
    outer, ``t`` inner, both ascending."""
    if not 0 < grid_step <= 0.25:
        raise InputError("grid step must lie in (0, 1/4]")
    px, py = _powers(X), _powers(Y)
    grid = closed_grid(0.5, 1.0, grid_step)
    right = tr_xy(px, py)
    lower = half_trace(px, py)
    rows = []
    for s in grid:
        for t in grid:
            val = aho_trace(px, py, s, t)
            up = _report("aho-upper", (s, t), val, abs(val), right, ExponentPair(s, t).theorem_region)
            lo = _report("aho-lower", (s, t), val, lower, abs(val))
            rows.append(ScanRow(s, t, val, right, up, lo))
    return rows
