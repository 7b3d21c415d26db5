import mpmath
import numpy as np
import pytest

from traceineq import aho, cex, sampling, suites
from traceineq.aho import (
    ExponentPair,
    Verdict,
    aho_lower_check,
    aho_trace,
    aho_upper_check,
    at_most_one_negative,
    bd_offdiag_check,
    conlem_check,
    four_matrix_bound,
    holder_check,
    imaginary_exponent_trace,
    lieb_thirring_check,
    m_profile,
    oct_quadratic_form,
    resolvent_positivity,
    second_order_expansion,
    semigroup_positivity,
)
from traceineq.gt import GraphSpec, graph_laplacian
from traceineq.matcore import InputError, frac_power, mat_exp

S_GRID = aho.closed_grid(0.1, 0.9, 0.1)


def mp_power(A, s, dps=40):
    """Extended-precision ``A^s`` for real symmetric PSD ``A``."""
    with mpmath.workdps(dps):
        E, Q = mpmath.eigsy(mpmath.matrix(A.tolist()))
        d = mpmath.diag([0 if e <= 0 else mpmath.power(e, s) for e in E])
        return Q * d * Q.T


def test_trivial_traces():
    assert aho_trace(np.eye(3), np.eye(3), 0.3, 0.8) == pytest.approx(3.0)
    X, Y = np.diag([1.0, 2.0]), np.diag([3.0, 4.0])
    for s, t in [(0.0, 0.0), (0.2, 0.9), (1.0, 0.5)]:
        assert aho_trace(X, Y, s, t) == pytest.approx(11.0)


def test_trace_against_extended_precision_seed_23():
    rng = np.random.default_rng(23)
    X, Y = sampling.random_psd(rng, 3), sampling.random_psd(rng, 3)
    with mpmath.workdps(40):
        ref = mpmath.fsum((mp_power(X, 0.6) * mp_power(Y, 0.6) * mp_power(X, 0.4) * mp_power(Y, 0.4))[i, i] for i in range(3))
    got = aho_trace(X, Y, 0.6, 0.6)
    assert abs(got - complex(ref)) <= 1e-10 * abs(float(ref))


def test_upper_endpoint_and_example_4_1():
    rng = np.random.default_rng(1)
    X, Y = sampling.random_pd(rng, 3), sampling.random_pd(rng, 3)
    rep = aho_upper_check(X, Y, 1.0, 1.0)
    assert rep.holds and abs(rep.margin) <= 1e-12 * rep.right
    inst = cex.example_4_1()
    rep = aho_upper_check(inst.x_decomposition, inst.y_decomposition, 0.79, 0.79)
    assert rep.verdict is Verdict.VIOLATED
    assert rep.left > 1.61022e-10 and rep.right < 1.50001e-10
    assert not rep.guaranteed and not rep.integrity_failure


def test_upper_holds_seed_29():
    rng = np.random.default_rng(29)
    X, Y = sampling.random_psd(rng, 4), sampling.random_psd(rng, 4)
    rep = aho_upper_check(X, Y, 0.7, 0.7)
    assert rep.holds and rep.guaranteed


def test_lower_examples():
    rng = np.random.default_rng(2)
    X, Y = sampling.random_psd(rng, 3), sampling.random_psd(rng, 3)
    rep = aho_lower_check(X, Y, 0.5, 0.5)
    assert rep.holds and abs(rep.margin) <= 1e-12 * max(rep.left, 1)
    inst = cex.example_4_2()
    rep = aho_lower_check(inst.x_decomposition, inst.y_decomposition, 0.98, 0.98)
    assert abs(rep.trace_value.imag) == 0.0
    # the stated bound -2.38674 lacks the 1e-7 factor; see the acceptance suite
    assert rep.trace_value.real < -2.38674e-7
    # with |Tr| on the right the check passes at 0.98; it fails where the trace crosses zero
    assert rep.holds
    tstar = cex.zero_crossing(inst, 0.5, 0.98)
    rep = aho_lower_check(inst.x_decomposition, inst.y_decomposition, tstar, tstar)
    assert rep.verdict is Verdict.VIOLATED
    C1, C2 = np.diag([1.0, 3.0, 0.5]), np.diag([2.0, 0.1, 4.0])
    for s in S_GRID:
        r = aho_lower_check(C1, C2, s, 1 - s / 2)
        assert abs(r.margin) <= 1e-12 * r.right


def test_verdict_tolerance_floor():
    assert aho.verdict_for(1e-10 + 5e-13, 1e-10) is Verdict.HOLDS
    assert aho.verdict_for(1e-10 + 2e-12, 1e-10) is Verdict.VIOLATED
    assert aho.verdict_for(3.0 + 2e-12, 3.0) is Verdict.HOLDS


def test_exponent_regions():
    assert ExponentPair(0.7, 0.8).theorem_region
    assert not ExponentPair(0.79, 0.79).theorem_region
    assert ExponentPair(0.79, 0.79).aho_region
    assert not ExponentPair(0.4, 0.9).aho_region


def test_four_matrix_examples():
    I = np.eye(3)
    rep = four_matrix_bound(I, I, I, I, 0.6, 0.7)
    assert rep.left == pytest.approx(3.0) and rep.right == pytest.approx(3.0) and rep.holds
    rng = np.random.default_rng(31)
    X, Y = sampling.random_psd(rng, 4), sampling.random_psd(rng, 4)
    assert four_matrix_bound(X, Y, X, Y, 0.6, 0.8).holds
    A = sampling.random_psd(rng, 3)
    rep = four_matrix_bound(A, A, A, A, 0.75, 0.75)
    assert rep.holds
    assert rep.trace_value.real == pytest.approx(np.trace(A @ A), rel=1e-12)
    assert four_matrix_bound(X, Y, X, Y, 0.9, 0.9).verdict is Verdict.NOT_APPLICABLE


def test_lieb_thirring_examples():
    rng = np.random.default_rng(37)
    A, B = sampling.random_pd(rng, 3), sampling.random_pd(rng, 3)
    rep2 = lieb_thirring_check(A, B, 2.0)
    assert rep2.holds and rep2.margin > 0
    rep_half = lieb_thirring_check(A, B, 0.5)
    assert rep_half.holds and rep_half.margin > 0
    D1, D2 = np.diag([1.0, 2.0, 5.0]), np.diag([0.5, 4.0, 1.0])
    for r in (0.3, 1.0, 2.5):
        rep = lieb_thirring_check(D1, D2, r)
        assert abs(rep.margin) <= 1e-12 * rep.right
    rep1 = lieb_thirring_check(A, B, 1.0)
    assert abs(rep1.margin) <= 1e-12 * rep1.right


def test_lieb_thirring_direction_flip_by_brute_force():
    rng = np.random.default_rng(38)
    A, B = sampling.random_pd(rng, 3, True), sampling.random_pd(rng, 3, True)
    Bh = frac_power(B, 0.5)
    for r in (0.3, 0.5, 2.0, 3.0):
        sandwich = np.trace(frac_power(Bh @ A @ Bh, r)).real
        product = np.trace(frac_power(A, r) @ frac_power(B, r)).real
        assert (sandwich <= product) == (r > 1)


def test_holder_examples():
    rng = np.random.default_rng(41)
    A = rng.standard_normal((3, 3))
    assert holder_check([A], [1]).holds
    v = rng.standard_normal(3)
    R1 = np.outer(v, v)
    rep = holder_check([R1, R1.T, np.eye(3) * 2], [2, 2, np.inf])
    assert rep.holds and abs(rep.margin) <= 1e-12 * rep.right
    mats = [rng.standard_normal((3, 3)) for _ in range(3)]
    assert holder_check(mats, [3, 3, 3]).holds
    with pytest.raises(InputError):
        holder_check(mats, [2, 2, 2])


def test_m_profile_diagonal_and_tridiagonal():
    X = np.diag([1.0, 4.0, 9.0])
    prof = m_profile(X, np.eye(3), 0.3)
    assert np.allclose(prof.m_matrix, np.diag([1.0, 4.0, 9.0]))
    dec = cex.tridiag_decomposition()
    for s in aho.closed_grid(0.0, 1.0, 0.05):
        M = m_profile(dec, np.eye(3), s).m_matrix
        assert M[0, 1] == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(InputError):
        m_profile(X, np.ones((3, 3)), 0.5)


def test_m_profile_invariants():
    rng = np.random.default_rng(61)
    for k in range(30):
        X = sampling.random_psd(rng, 4, rank=3 + k % 2, complex_=True)
        B = sampling.random_unitary(rng, 4, True)
        for s in (0.2, 0.5, 0.9):
            M = m_profile(X, B, s).m_matrix
            scale = max(1.0, np.max(np.abs(M)))
            assert np.allclose(M, M.conj().T, atol=1e-12 * scale)
            assert np.linalg.eigvalsh((M + M.conj().T) / 2).min() >= -1e-12 * scale
            assert np.real(np.diag(M)).min() >= -1e-12 * scale


def test_two_by_two_offdiagonal_sign():
    rng = np.random.default_rng(62)
    for k in range(100):
        X = sampling.random_psd(rng, 2, complex_=bool(k % 2))
        B = sampling.random_unitary(rng, 2, complex_=bool(k % 3))
        for s in S_GRID:
            m12 = m_profile(X, B, s).m_matrix[0, 1]
            scale = max(1.0, np.linalg.norm(X))
            assert np.real(m12) >= -1e-12 * scale
            assert abs(np.imag(m12)) <= 1e-12 * scale


def test_conlem_examples():
    rng = np.random.default_rng(63)
    G = np.abs(rng.standard_normal((3, 3)))
    X = mat_exp(G + G.T)
    Y = np.diag([0.5, 2.0, 1.0])
    grid = aho.closed_grid(0.0, 1.0, 0.1)
    res = conlem_check(X, Y, grid, grid)
    assert res.condition_holds and res.sandwich_holds and res.reports
    X2, Y2 = sampling.random_psd(rng, 2, complex_=True), sampling.random_psd(rng, 2)
    res2 = conlem_check(X2, Y2, grid, grid)
    assert res2.condition_holds and res2.sandwich_holds
    res3 = conlem_check(np.eye(3), np.eye(3), grid, grid)
    assert res3.condition_holds
    assert all(abs(r.left - r.right) <= 1e-12 for r in res3.reports)
    res4 = conlem_check(cex.tridiag_decomposition(), np.diag([1.0, 0.0, 2.0]), grid, grid)
    assert not res4.condition_holds and res4.negative_entries


def test_bd_offdiag_examples():
    assert bd_offdiag_check(graph_laplacian(GraphSpec.path(3))).ok
    chk = bd_offdiag_check(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert not chk.ok and chk.witness == (0, 1, 1.0)
    rng = np.random.default_rng(43)
    A = rng.standard_normal((5, 5))
    A = -np.abs(A + A.T)
    np.fill_diagonal(A, rng.standard_normal(5))
    assert bd_offdiag_check(A).ok


def test_semigroup_examples():
    grid = aho.closed_grid(0.1, 5.0, 0.1)
    assert semigroup_positivity(np.diag([3.0, -1.0, 0.5]), grid).ok
    assert semigroup_positivity(graph_laplacian(GraphSpec.path(4)), grid).ok
    rep = semigroup_positivity(np.array([[1.0, -2.0], [-2.0, 1.0]]), grid)
    assert rep.applicable and rep.ok
    s = 0.7  # closed form: e^{-s} [[cosh 2s, sinh 2s], [sinh 2s, cosh 2s]]
    E = mat_exp(-s * np.array([[1.0, -2.0], [-2.0, 1.0]]))
    assert E[0, 1] == pytest.approx(np.exp(-s) * np.sinh(2 * s), rel=1e-13)
    assert not semigroup_positivity(np.array([[0.0, 1.0], [1.0, 0.0]]), grid).applicable


def test_resolvent_examples():
    rep = resolvent_positivity(np.zeros((3, 3)), 0.1, 4)
    assert rep.ok and rep.limit_ok
    rep = resolvent_positivity(graph_laplacian(GraphSpec.path(5)), 0.1, 8)
    assert rep.applicable and rep.ok and rep.limit_ok
    rep = resolvent_positivity(np.array([[1.0, 0.3], [0.3, 1.0]]), 0.1, 4)
    assert not rep.applicable


def test_resolvent_limit_scaling():
    H = graph_laplacian(GraphSpec.path(3))
    e1 = aho.resolvent_limit_error(H, 0.5, 2**10)
    e2 = aho.resolvent_limit_error(H, 0.5, 2**11)
    assert e1 / e2 == pytest.approx(2.0, rel=1e-2)


def test_expansion_commuting_pair():
    H, K = np.diag([0.3, -0.5]), np.diag([0.9, 0.1])
    e = second_order_expansion(H, K, 1e-2, 0.75, 0.75)
    assert abs(e.exact - e.tr_xy) <= 1e-12
    assert e.commutator_square == 0


def test_expansion_quartic_law_on_fixed_pair():
    H, K = suites.expansion_pair()
    for s, t in [(0.6, 0.6), (0.75, 0.9), (0.75, 0.75)]:
        e = second_order_expansion(H, K, 1e-2, s, t)
        assert (e.exact - e.tr_xy) == pytest.approx(e.quartic, rel=1e-3)
        assert e.exact < e.tr_xy


def test_expansion_residual_is_quadratic_in_alpha():
    # the residual against the a^2 predictor halves by a factor close to 4
    H, K = suites.expansion_pair()
    for s, t in suites.EXPANSION_POINTS:
        for r in suites.residual_ratios(H, K, s, t):
            assert r == pytest.approx(4.0, rel=1e-4)


def test_imaginary_exponent_trace_exceeds_trxy():
    H, K = suites.expansion_pair()
    for alpha in (1e-2, 5e-3):
        val, txy = imaginary_exponent_trace(H, K, alpha, 0.5, 0.5)
        assert val.real > txy


def test_structural_symmetries():
    rng = np.random.default_rng(64)
    for k in range(100):
        n = (2, 3, 4)[k % 3]
        X = suites.random_pair_kind(rng, n, k)
        Y = suites.random_pair_kind(rng, n, k + 1)
        s, t = rng.uniform(0, 1, 2)
        f = aho_trace(X, Y, s, t)
        scale = max(abs(f), 1e-300)
        assert abs(f - aho_trace(X, Y, 1 - s, 1 - t)) <= 1e-12 * scale
        assert abs(np.conj(f) - aho_trace(X, Y, s, 1 - t)) <= 1e-12 * scale


def test_real_inputs_real_trace_and_endpoint():
    rng = np.random.default_rng(65)
    for _ in range(30):
        X, Y = sampling.random_pd(rng, 4), sampling.random_pd(rng, 4)
        txy = aho.tr_xy(X, Y)
        for t in (0.0, 0.3, 1.0):
            f = aho_trace(X, Y, 1.0, t)
            assert abs(f.imag) <= 1e-12 * txy
            assert f.real == pytest.approx(txy, rel=1e-12)


def test_oct_examples():
    rng = np.random.default_rng(47)
    X = sampling.random_psd(rng, 4)
    assert abs(oct_quadratic_form(X, 0.4, np.full(4, 2.5))) <= 1e-14
    y = rng.standard_normal(4)
    q = oct_quadratic_form(X, 0.4, y)
    assert q >= 0
    assert oct_quadratic_form(X, 0.4, y + 3.0) == pytest.approx(q, rel=1e-12)
    dec = cex.tridiag_decomposition()
    M = m_profile(dec, np.eye(3), 0.9).m_matrix
    q = oct_quadratic_form(dec, 0.9, [1.0, 1.0, 0.0])
    assert q == pytest.approx(2 * (M[0, 2] + M[1, 2]), rel=1e-12)
    assert q >= 0


def test_at_most_one_negative_examples():
    grid = aho.closed_grid(0.05, 0.95, 0.05)
    rep = at_most_one_negative(cex.tridiag_decomposition(), grid)
    assert rep.ok
    for s, (m12, m13, m23), count in rep.rows:
        assert m13 <= 1e-12 and m12 >= 0 and m23 >= 0
    rep = at_most_one_negative(np.diag([1.0, 2.0, 3.0]), grid)
    assert all(row[1] == (0.0, 0.0, 0.0) for row in rep.rows)
    with pytest.raises(InputError):
        at_most_one_negative(np.eye(4), grid)


def test_scan_examples():
    rows = aho.scan(np.eye(3), np.eye(3), 0.25)
    assert len(rows) == 9
    assert all(r.upper.holds and r.lower.holds for r in rows)
    assert all(abs(r.upper.margin) <= 1e-12 and abs(r.lower.margin) <= 1e-12 for r in rows)
    inst = cex.example_4_1()
    rows = aho.scan(inst.x_decomposition, inst.y_decomposition, 0.01)
    bad = [r for r in rows if not r.upper.holds]
    assert bad and all(r.s + r.t > 1.5 for r in bad)
    assert any(r.s == 0.79 and r.t == 0.79 for r in bad)
    inst = cex.example_4_2()
    rows = aho.scan(inst.x_decomposition, inst.y_decomposition, 0.01)
    assert any(r.trace.real < 0 for r in rows)


def test_closed_grid():
    g = aho.closed_grid(0.5, 1.0, 0.05)
    assert g[0] == 0.5 and g[-1] == 1.0 and len(g) == 11
    assert aho.closed_grid(0.5, 1.0, 0.3) == [0.5, 0.8, 1.0]
