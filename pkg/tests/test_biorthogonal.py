import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflect6v import biorthogonal as bo
from reflect6v import correlations as co
from reflect6v import homogeneous as hm
from reflect6v import oracle_algebraic as oa
from reflect6v import weights as w
from reflect6v.errors import DegenerateMoments, IndexOutOfRange
from reflect6v.linalg import det

POINT = hm.HomogeneousPoint(0.6, 0.15, 0.4, 1.2)


def close(a, b, tol=1e-8):
    return abs(a - b) <= tol * max(1.0, abs(b))


def test_low_order_polynomials():
    table = bo.moments(POINT, 3)
    fam = bo.polynomials(table)
    m = table.m
    assert np.allclose(fam.P[0], [1])
    assert fam.J[0] == pytest.approx(m[0, 0])
    assert np.allclose(fam.P[1], [-m[1, 0] / m[0, 0], 1])
    # monic, with J_n the ratio of consecutive leading minors
    for n, P in enumerate(fam.P):
        assert P[-1] == pytest.approx(1)
        assert fam.J[n] == pytest.approx(table.leading_minor(n + 1) / table.leading_minor(n) if n else m[0, 0])
    assert np.allclose(fam.V(2), 2 / fam.J[2] * fam.P[2])


def test_biorthogonality():
    # sum_jk p_j q_k m[j, k] with p = P_a (x-side) vanishes against every mu-monomial of lower degree
    table = bo.moments(POINT, 5)
    fam = bo.polynomials(table)
    for a in range(1, 5):
        for k in range(a):
            pairing = fam.P[a] @ table.m[: a + 1, k]
            assert abs(pairing) <= 1e-9 * abs(fam.J[a])


@settings(max_examples=15, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), min_size=1, max_size=3))
def test_bordered_identity(xs):
    table = bo.moments(POINT, 4)
    fam = bo.polynomials(table)
    lhs, rhs = bo.bordered_det(table, xs), bo.bordered_rhs(table, fam, xs)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@pytest.mark.parametrize("N", [2, 3, 4, 5, 6])
def test_det_from_j(N):
    point = POINT.with_n(N)
    fam = bo.polynomials(bo.moments(point, N))
    mbar = det(hm.build_mbar(point))
    assert bo.mbar_from_j(fam, point.eta) == pytest.approx(mbar, rel=1e-9)
    table = bo.moments(point, N)
    assert table.leading_minor(N) == pytest.approx(w.c_weight(point.eta) ** N * mbar, rel=1e-9)


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_reduced_forms_match_full(N):
    for r in range(1, N + 1):
        assert close(bo.g_poly(POINT, N, r), hm.g_hom(POINT, N, r))
        assert close(bo.h_poly(POINT, N, r), hm.h_hom(POINT, N, r))
        assert close(bo.f_poly(POINT, N, r, 1), bo.g_poly(POINT, N, r))
        for s in range(1, N + 1):
            assert close(bo.f_poly(POINT, N, r, s), hm.f_hom(POINT, N, r, s))
    assert close(bo.z_poly(POINT, N), hm.z_hom(POINT, N), 1e-9)


def test_n3_against_oracle():
    p = POINT.params(3)
    for r in range(1, 4):
        assert close(bo.h_poly(POINT, 3, r), oa.h_oracle(p, r), 1e-9)
        for s in range(1, 4):
            assert close(bo.f_poly(POINT, 3, r, s), oa.f_oracle(p, r, s), 1e-9)


def _h_integrand_plus(point, N, r):
    # the t2 bracket with the opposite sign
    params = point.with_n(N).params()
    eta, lam, mu = point.eta, point.lam, point.mu
    (eps,) = hm._variables(point, 1, N)
    t1, t2 = co.t_parts(eps, params, r)
    inv_f1_mu = w.b_minus(lam, mu) * w.a_plus(lam, mu, eta) / (w.a_minus(lam, mu, eta) * w.b_plus(lam, mu))
    inv_f1_eps = w.b_minus(lam, eps) * w.a_plus(lam, eps, eta) / (w.a_minus(lam, eps, eta) * w.b_plus(lam, eps))
    ap = w.a_plus(eps, lam, eta)
    c = w.c_weight(eta)
    inv_g1_eps = w.b_minus(eps, lam) * w.b_plus(eps, lam) / (w.a_minus(eps, lam, eta) * ap * (1 - c * c / (ap * ap)))
    den = w.a_minus(eps, mu, eta) * w.b_plus(eps, mu)
    return (t1 * (1 - inv_f1_mu * inv_f1_eps) + t2 * (1 + inv_f1_mu * inv_g1_eps)) / den


def test_h_bracket_sign():
    N = 4
    p = POINT.params(N)
    fam = bo.polynomials(bo.moments(POINT.with_n(N), N))
    worst_plus = 0
    for r in range(2, N + 1):
        pre = bo._poly_prefactor(POINT.with_n(N), N, r, 1)
        plus = pre * bo.apply_polynomial_det([fam.V(N - 1)], _h_integrand_plus(POINT, N, r))
        worst_plus = max(worst_plus, abs(plus - oa.h_oracle(p, r)))
        assert close(bo.h_poly(POINT, N, r, fam), oa.h_oracle(p, r), 1e-9)
    assert worst_plus > 1e-3


def test_polynomial_rows_shape():
    fam = bo.polynomials(bo.moments(POINT.with_n(5), 5))
    rows = bo.polynomial_rows(fam, 5, 3)
    assert [len(v) for v in rows] == [3, 4, 5]


def test_errors():
    fam = bo.polynomials(bo.moments(POINT.with_n(3), 3))
    with pytest.raises(IndexOutOfRange):
        bo.f_poly(POINT, 3, 0, 1, fam)
    assert bo.f_poly(POINT, 3, 1, 2, fam) == 0
    with pytest.raises(DegenerateMoments):
        bo.polynomials(bo.moments(POINT.with_n(3), 3), tol=1e300)
    degenerate = bo.MomentTable(POINT, 2, np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex))
    with pytest.raises(DegenerateMoments):
        bo.polynomials(degenerate)
