import mpmath
import numpy as np
import pytest

from traceineq import aho, cex
from traceineq.cex import (
    CexParams,
    PrecisionRegimeError,
    aho_trace_structured,
    build,
    example_4_1,
    example_4_2,
    x_power,
)
from traceineq.matcore import DomainError, InputError, eig_hermitian

SQ2 = np.sqrt(2.0)
REFERENCE_U = 0.5 * np.array([[1, -1, SQ2], [-1, 1, SQ2], [SQ2, SQ2, 0]])


def mp_trace(params: CexParams, s, t, dps=60):
    """The structured trace in extended precision, independent of numpy."""
    with mpmath.workdps(dps):
        r2 = mpmath.sqrt(2)
        U = mpmath.matrix([[1, -1, r2], [-1, 1, r2], [r2, r2, 0]]) / 2
        x = mpmath.mpf(params.x)
        R = mpmath.matrix([[mpmath.cos(x), 0, -mpmath.sin(x)], [0, 1, 0], [mpmath.sin(x), 0, mpmath.cos(x)]])
        Q = R * U
        lam = [mpmath.mpf(params.a), mpmath.mpf(params.b), mpmath.mpf(1)]
        y = [mpmath.mpf(params.c), mpmath.mpf(params.d), mpmath.mpf(1)]

        def xp(p):
            return Q * mpmath.diag([v**p if v > 0 else 0 for v in lam]) * Q.T

        def yp(p):
            return mpmath.diag([v**p if v > 0 else 0 for v in y])

        P = xp(mpmath.mpf(s)) * yp(mpmath.mpf(t)) * xp(1 - mpmath.mpf(s)) * yp(1 - mpmath.mpf(t))
        return float(mpmath.fsum(P[i, i] for i in range(3)))


def test_params_validation():
    with pytest.raises(InputError):
        CexParams(0.0, 1.0, 0.0, 1.0, 1.0)
    with pytest.raises(InputError):
        CexParams(1.0, 1.0, 0.0, -1.0, 1.0)
    assert example_4_1().params.swapped() == example_4_2().params


def test_reflection_and_rotation():
    inst = example_4_1()
    assert np.allclose(inst.U, REFERENCE_U, atol=1e-15)
    assert np.allclose(inst.U @ inst.U, np.eye(3), atol=1e-14)
    assert np.allclose(inst.R @ inst.R.T, np.eye(3), atol=1e-14)


def test_orthogonal_projectors():
    U = cex.reflection_u()
    X0 = U @ np.diag([0.0, 0.0, 1.0]) @ U
    Y0 = np.diag([0.0, 0.0, 1.0])
    assert np.allclose(X0, 0.5 * np.array([[1, 1, 0], [1, 1, 0], [0, 0, 0]]), atol=1e-15)
    assert np.allclose(X0 @ Y0, 0, atol=1e-15)


def test_build_examples():
    assert np.allclose(build(CexParams(1, 1, 0, 1, 1)).X, np.eye(3), atol=1e-15)
    inst = build(CexParams(0.2, 0.1, 0.0, 1.0, 1.0))
    assert np.allclose(inst.X, REFERENCE_U @ np.diag([0.2, 0.1, 1]) @ REFERENCE_U, atol=1e-15)
    assert np.allclose(eig_hermitian(inst.X).eigenvalues, [0.1, 0.2, 1.0], atol=1e-14)
    assert np.allclose(inst.generic_x_decomposition().eigenvalues, [0.1, 0.2, 1.0], atol=1e-14)


def test_generic_path_refused_for_tiny_eigenvalues():
    with pytest.raises(PrecisionRegimeError):
        example_4_1().generic_x_decomposition()


def test_spectrum_preserved():
    inst = build(CexParams(0.3, 2e-6, 0.2, 1.0, 0.5))
    got = inst.generic_x_decomposition().eigenvalues
    assert np.allclose(got, np.sort(inst.A_diag), rtol=1e-9, atol=1e-15)


@pytest.mark.parametrize("params", [example_4_1().params, example_4_2().params, CexParams(0.4, 0.03, 0.7, 1, 1)])
def test_power_consistency(params):
    inst = build(params)
    for s, t in [(0.2, 0.3), (0.5, 0.5), (0.79, 0.21), (0.0, 1.0)]:
        assert np.allclose(x_power(inst, s) @ x_power(inst, t), x_power(inst, s + t), atol=1e-14)
    assert np.allclose(x_power(inst, 1.0), inst.X)
    assert np.allclose(x_power(inst, 0.0), np.eye(3), atol=1e-15)


def test_offdiagonal_closed_form():
    inst = example_4_1()
    Xt = x_power(inst, 0.79)
    x13, x23 = cex.x_power_offdiag_closed_form(inst, 0.79)
    assert abs(Xt[0, 2] - x13) <= 1e-15
    assert abs(Xt[1, 2] - x23) <= 1e-15


def test_example_4_1_values():
    inst = example_4_1()
    txy = aho_trace_structured(inst, 1.0, 1.0)
    val = aho_trace_structured(inst, 0.79, 0.79)
    assert txy < 1.50001e-10
    assert val > 1.61022e-10
    assert txy == pytest.approx(mp_trace(inst.params, 1, 1), rel=1e-12)
    assert val == pytest.approx(mp_trace(inst.params, 0.79, 0.79), rel=1e-10)


def test_example_4_2_value_at_corrected_scale():
    inst = example_4_2()
    val = aho_trace_structured(inst, 0.98, 0.98)
    assert val == pytest.approx(mp_trace(inst.params, 0.98, 0.98), rel=1e-9)
    assert -2.38675e-7 < val < -2.38674e-7


def test_factored_vs_generic_agreement():
    rng = np.random.default_rng(71)
    for _ in range(10):
        a, b = 10.0 ** rng.uniform(-4, 0, 2)
        c, d = rng.uniform(0, 1, 2)
        inst = build(CexParams(a, b, rng.uniform(0, 1), c, d))
        gen = inst.generic_x_decomposition()
        for s, t in [(0.6, 0.7), (0.9, 0.55)]:
            ref = aho_trace_structured(inst, s, t)
            got = aho.aho_trace(gen, inst.y_decomposition, s, t)
            assert abs(got - ref) <= 1e-10 * abs(ref)


def test_theorem_region_unaffected():
    inst = example_4_1()
    px, py = inst.x_decomposition, inst.y_decomposition
    for s in aho.closed_grid(0.5, 1.0, 0.01):
        for t in aho.closed_grid(0.5, 1.0, 0.01):
            if s + t <= 1.5 + 1e-12:
                assert aho.aho_upper_check(px, py, s, t).holds


@pytest.mark.parametrize("factory", [example_4_1, example_4_2])
def test_cancellation_diagnostic(factory):
    assert cex.cancellation_ratio(factory()) < 1e-3


def test_zero_crossing():
    inst = example_4_2()
    tstar = cex.zero_crossing(inst, 0.5, 0.98)
    assert 0.5 < tstar < 0.98
    assert abs(aho_trace_structured(inst, tstar, tstar)) < aho.half_trace(inst.x_decomposition, inst.y_decomposition)
    lo = aho_trace_structured(inst, tstar - 1e-9, tstar - 1e-9)
    hi = aho_trace_structured(inst, tstar + 1e-9, tstar + 1e-9)
    assert lo > 0 > hi
    with pytest.raises(DomainError):
        cex.zero_crossing(build(CexParams(1, 1, 0, 1, 1)), 0.5, 0.98)


def test_gt_derivative_examples():
    assert cex.gt_cex_derivative(build(CexParams(1, 1, 0, 1, 1))) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DomainError):
        cex.gt_cex_derivative(build(CexParams(1, 1, 0, 0, 0)))
    values = [cex.gt_cex_derivative(example_4_1()), cex.gt_cex_derivative(example_4_2())]
    assert min(values) < -3e-6
    assert any(v < 0 and 1e-7 <= abs(v) <= 1e-4 for v in values)


def test_gt_derivative_regularised_against_extended_precision():
    """With d > 0 both sides are finite; a high-precision central difference of
    f at u = 1 must match the analytic kernel."""
    inst = example_4_1()
    d = 1e-30
    analytic = cex.gt_cex_derivative(inst, d=d)
    p = inst.params
    with mpmath.workdps(50):
        r2 = mpmath.sqrt(2)
        U = mpmath.matrix([[1, -1, r2], [-1, 1, r2], [r2, r2, 0]]) / 2
        x = mpmath.mpf(p.x)
        R = mpmath.matrix([[mpmath.cos(x), 0, -mpmath.sin(x)], [0, 1, 0], [mpmath.sin(x), 0, mpmath.cos(x)]])
        Q = R * U
        lam = [mpmath.mpf(p.a), mpmath.mpf(p.b), mpmath.mpf(1)]
        K = Q * mpmath.diag([mpmath.log(v) for v in lam]) * Q.T
        H = mpmath.diag([mpmath.log(mpmath.mpf(p.c)), mpmath.log(mpmath.mpf(d)), 0])

        def f(u):
            P = mpmath.expm(H + (1 - u) * K) * Q * mpmath.diag([v**u for v in lam]) * Q.T
            return mpmath.fsum(P[i, i] for i in range(3))

        h = mpmath.mpf("1e-8")
        fd = float((f(1 + h) - f(1 - h)) / (2 * h))
    assert analytic == pytest.approx(fd, rel=1e-8)


def test_gt_derivative_regularisation_approaches_limit():
    inst = example_4_1()
    exact = cex.gt_cex_derivative(inst)
    vals = [cex.gt_cex_derivative(inst, d=10.0**-k) for k in (30, 60, 120, 240)]
    gaps = [abs(v - exact) for v in vals]
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
    assert all(v > exact for v in vals)


def test_tridiagonal_identities():
    dec = cex.tridiag_decomposition()
    assert np.allclose(dec.matrix(), cex.tridiag_sqrt() @ cex.tridiag_sqrt(), atol=1e-13)
    assert np.allclose(aho.m_profile(dec, np.eye(3), 0.5).m_matrix[0, 2], 0.0, atol=1e-14)
    M1 = aho.m_profile(dec, np.eye(3), 1.0).m_matrix
    assert M1[0, 2] == pytest.approx(-0.5, abs=1e-13)
    assert M1[0, 0] == pytest.approx(4.5, abs=1e-13)
    assert cex.h_shape(1.0) == pytest.approx(2.5)
    rep = cex.tridiag_demo()
    assert rep.ok, rep.failures[:5]
    assert rep.max_m_error <= 1e-12 and rep.max_trace_error <= 1e-12
