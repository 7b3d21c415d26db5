"""Seeded property suites, shared by ``traceineq verify`` and the tests."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import aho, sampling
from .aho import ExponentPair, closed_grid

SIZES = (2, 3, 4, 8)
LT_EXPONENTS = (0.3, 0.5, 2.0, 3.0)
EXPANSION_ALPHAS = (1e-2, 5e-3, 2.5e-3)
EXPANSION_POINTS = ((0.6, 0.6), (0.75, 0.9), (1.0, 1.0))
SEMIGROUP_TIMES = tuple(round(0.1 * k, 10) for k in range(1, 51))


@dataclass
class Tally:
    name: str
    passed: int = 0
    total: int = 0
    worst: float = float("nan")

    def add(self, ok: bool, value: float | None = None, *, larger_is_worse: bool = False):
        self.total += 1
        self.passed += bool(ok)
        if value is not None:
            if np.isnan(self.worst):
                self.worst = value
            else:
                self.worst = max(self.worst, value) if larger_is_worse else min(self.worst, value)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def region_grid(step: float = 0.05) -> list[tuple[float, float]]:
    g = closed_grid(0.5, 1.0, step)
    return [(s, t) for s in g for t in g if ExponentPair(s, t).theorem_region]


def _scaled_margin(rep: aho.BoundReport) -> float:
    return rep.margin / max(abs(rep.left), abs(rep.right), 1.0)


def random_pair_kind(rng, n: int, k: int):
    """Cycle through real, complex and rank-deficient PSD matrices."""
    kind = k % 3
    if kind == 0:
        return sampling.random_psd(rng, n)
    if kind == 1:
        return sampling.random_psd(rng, n, complex_=True)
    return sampling.random_psd(rng, n, rank=max(1, n - 1), complex_=bool(k % 2))


def lt_suite(trials: int, seed: int) -> list[Tally]:
    rng = sampling.rng_for(seed)
    direction = Tally("lieb-thirring/araki direction")
    strict = Tally("strict gap for r in {2, 3}")
    commuting = Tally("equality for commuting pairs")
    for k in range(trials):
        n = (2, 3, 4)[k % 3]
        A = sampling.random_pd(rng, n, complex_=bool(k % 2))
        B = sampling.random_pd(rng, n, complex_=bool(k % 2))
        Q = sampling.random_unitary(rng, n)
        CA = (Q * np.exp(rng.uniform(-1, 1, n))) @ Q.T
        CB = (Q * np.exp(rng.uniform(-1, 1, n))) @ Q.T
        for r in LT_EXPONENTS:
            rep = aho.lieb_thirring_check(A, B, r)
            direction.add(rep.holds, _scaled_margin(rep))
            if r >= 2:
                strict.add(rep.margin > 0, rep.margin)
            c = aho.lieb_thirring_check(CA, CB, r)
            gap = abs(c.margin) / max(abs(c.left), abs(c.right))
            commuting.add(gap <= 1e-12, gap, larger_is_worse=True)
    return [direction, strict, commuting]


def holder_suite(trials: int, seed: int) -> list[Tally]:
    rng = sampling.rng_for(seed)
    tallies = {p: Tally(f"holder p={p}") for p in ((3, 3, 3), (2, 4, 4), (2, 2, np.inf), (1,))}
    for k in range(trials):
        n = (2, 3, 4, 5)[k % 4]
        mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(3)]
        for p, tally in tallies.items():
            rep = aho.holder_check(mats[: len(p)], p)
            tally.add(rep.holds, _scaled_margin(rep))
    return list(tallies.values())


def aho_region_suite(trials: int, seed: int, four_matrix_trials: int | None = None) -> list[Tally]:
    rng = sampling.rng_for(seed)
    grid = region_grid()
    upper = Tally("upper bound, s+t <= 3/2")
    for k in range(trials):
        n = SIZES[k % len(SIZES)]
        X = random_pair_kind(rng, n, k)
        Y = random_pair_kind(rng, n, k + 1)
        px, py = aho._Powers(X), aho._Powers(Y)
        for s, t in grid:
            rep = aho.aho_upper_check(px, py, s, t)
            upper.add(rep.holds, _scaled_margin(rep))
    four = Tally("four-matrix bound")
    quads = trials // 5 if four_matrix_trials is None else four_matrix_trials
    for k in range(quads):
        n = SIZES[k % len(SIZES)]
        mats = [aho._Powers(random_pair_kind(rng, n, k + j)) for j in range(4)]
        for s, t in grid:
            rep = aho.four_matrix_bound(*mats, s, t)
            four.add(rep.holds, _scaled_margin(rep))
    return [upper, four]


def bd_suite(trials: int, seed: int) -> list[Tally]:
    rng = sampling.rng_for(seed)
    semigroup = Tally("exp(-sH) entrywise >= 0")
    resolvent = Tally("(I + lam H)^-k entrywise >= 0")
    limit = Tally("resolvent limit within 1e-6")
    for k in range(trials):
        H = sampling.random_bd_matrix(rng, (2, 3, 4, 6, 8)[k % 5])
        rep = aho.semigroup_positivity(H, SEMIGROUP_TIMES)
        semigroup.add(rep.applicable and rep.ok, rep.min_entry)
        res = aho.resolvent_positivity(H, 0.1, 8)
        resolvent.add(res.applicable and res.ok, res.min_entry)
        limit.add(res.limit_ok, res.limit_error, larger_is_worse=True)
    return [semigroup, resolvent, limit]


def oct_suite(trials: int, seed: int) -> list[Tally]:
    rng = sampling.rng_for(seed)
    quad = Tally("oct quadratic form >= 0")
    one_neg = Tally("at most one negative M entry (3x3)")
    s_grid = closed_grid(0.05, 0.95, 0.05)
    for k in range(trials):
        n = (3, 4, 5)[k % 3]
        X = sampling.random_psd(rng, n, rank=n if k % 4 else n - 1)
        px = aho._Powers(X)
        y = rng.standard_normal(n)
        s = float(rng.uniform(0.01, 0.99))
        q = aho.oct_quadratic_form(px, s, y)
        scale = max(1.0, float(np.max(np.abs(px(1.0)))) * float(np.sum(y**2)))
        quad.add(q >= -1e-12 * scale, q / scale)
        X3 = sampling.random_psd(rng, 3)
        one_neg.add(aho.at_most_one_negative(X3, s_grid).ok)
    return [quad, one_neg]


def expansion_pair() -> tuple[np.ndarray, np.ndarray]:
    """The fixed noncommuting contractions used for the scaling study."""
    return np.array([[0.0, 1.0], [1.0, 0.0]]), np.diag([1.0, -1.0])


def residual_ratios(H, K, s: float, t: float, alphas=EXPANSION_ALPHAS) -> list[float]:
    res = [abs(aho.second_order_expansion(H, K, a, s, t).residual) for a in alphas]
    return [res[i] / res[i + 1] for i in range(len(res) - 1)]


def expansion_suite(trials: int, seed: int) -> list[Tally]:
    rng = sampling.rng_for(seed)
    ratio = Tally("residual ratio per halving in [4, 16]")
    quartic = Tally("exact - Tr[XY] matches quartic law to 1% + n a^6")
    commutator = Tally("Tr[[H,K]^2] < 0")
    imag = Tally("Re Tr[X^(1-it) Y^(1-is) X^(it) Y^(is)] > Tr[XY]")
    pairs = [expansion_pair()]
    for k in range(max(trials - 1, 0)):
        n = (2, 3, 4)[k % 3]
        pairs.append((sampling.random_hermitian(rng, n), sampling.random_hermitian(rng, n)))
    for H, K in pairs:
        for s, t in EXPANSION_POINTS:
            for r in residual_ratios(H, K, s, t):
                ratio.add(4.0 <= r <= 16.0, r)
            if s < 1 and t < 1:
                a = EXPANSION_ALPHAS[0]
                e = aho.second_order_expansion(H, K, a, s, t)
                err = abs((e.exact - e.tr_xy) - e.quartic)
                quartic.add(err <= 1e-2 * abs(e.quartic) + H.shape[0] * a**6,
                            err / abs(e.quartic), larger_is_worse=True)
        e = aho.second_order_expansion(H, K, 1e-2, 0.5, 0.5)
        commutator.add(e.commutator_square < 0, e.commutator_square)
        val, txy = aho.imaginary_exponent_trace(H, K, 1e-2, 0.5, 0.5)
        imag.add(val.real > txy, val.real - txy)
    return [ratio, quartic, commutator, imag]


SUITES: dict[str, Callable[[int, int], list[Tally]]] = {
    "lt": lt_suite,
    "holder": holder_suite,
    "aho-region": aho_region_suite,
    "bd": bd_suite,
    "oct": oct_suite,
    "expansion": expansion_suite,
}
