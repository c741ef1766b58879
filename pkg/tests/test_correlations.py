import numpy as np
import pytest

from conftest import draw, rel
from reflect6v import correlations as co
from reflect6v import oracle_algebraic as oa
from reflect6v.errors import IndexOutOfRange, SizeCap
from reflect6v.weights import ModelParameters


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(b))


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_h_and_g_against_oracle(rng, N):
    for _ in range(3):
        p = draw(rng, N)
        for r in range(1, N + 1):
            h, g = oa.h_oracle(p, r), oa.g_oracle(p, r)
            assert close(co.h_det(p, r), h)
            assert close(co.g_det(p, r), g)
            assert close(co.h_recursion(p, r), h)
            assert close(co.g_recursion(p, r), g)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_efp_against_oracle(rng, N):
    p = draw(rng, N)
    for r in range(1, N + 1):
        for s in range(1, N + 1):
            f = oa.f_oracle(p, r, s)
            assert close(co.f_sum(p, r, s), f)
            assert close(co.f_recursion(p, r, s), f)


def test_sum_rules(rng):
    p = draw(rng, 5)
    assert close(co.g_det(p, 5), 1.0, 1e-10)
    assert close(sum(co.h_det(p, r) for r in range(1, 6)), 1.0, 1e-10)
    for r in range(1, 6):
        assert close(co.f_sum(p, r, 1), co.g_det(p, r), 1e-10)
        assert close(co.f_sum(p, 5, r), 1.0, 1e-10)


def test_efp_zero_beyond_r(rng):
    p = draw(rng, 4)
    for r in range(1, 4):
        for s in range(r + 1, 5):
            assert co.f_sum(p, r, s) == 0
            assert co.f_recursion(p, r, s) == 0


def test_aux_functions_vanish_on_upper_rows(rng):
    p = draw(rng, 5)
    for r in range(1, 5):
        aux = co.aux_functions(p, r)
        for i in range(r + 1, 6):
            lam = p.lambdas[i - 1]
            assert aux.u(lam) == 0 and aux.t(lam) == 0
        lam0 = p.lambdas[0]
        assert aux.u(lam0) == pytest.approx(aux.u1(lam0) + aux.u2(lam0))
        assert aux.s_g(1) == co.s_g(p, 1, r)


def test_regularised_u_matches_raw(rng):
    p = draw(rng, 4)
    for r in range(1, 5):
        for lam in (0.17 + 0.3j, -0.4 + 0.05j):
            raw = co.u_parts_raw(lam, p, r)
            reg = co.u_parts(lam, p, r)
            assert np.allclose(reg, raw, rtol=1e-10, atol=0)
        # finite at the removable point
        assert np.all(np.isfinite(co.u_parts(p.lambdas[r - 1], p, r)))


def test_index_and_cap_errors():
    p = ModelParameters.homogeneous(0.6, 0.15, 3)
    with pytest.raises(IndexOutOfRange):
        co.h_det(p, 0)
    with pytest.raises(IndexOutOfRange):
        co.f_sum(p, 2, 4)
    q = ModelParameters(0.4, 1.2, tuple(0.3 + 0.1 * k for k in range(7)), tuple(0.02 * k for k in range(7)))
    with pytest.raises(SizeCap):
        co.f_sum(q, 7, 7)
