from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import draw, rel
from reflect6v import oracle_algebraic as oa
from reflect6v import tsuchiya as ts
from reflect6v import validation
from reflect6v import weights as w
from reflect6v.errors import CoincidentParameters, IndexOutOfRange, SingularKernel
from reflect6v.linalg import minor_det
from reflect6v.weights import ModelParameters


def test_build_m(rng):
    p = ModelParameters(0.4, 1.2, (0.6,), (0.15,))
    assert ts.build_m(p)[0, 0] == pytest.approx(w.psi(0.6, 0.15, 0.4))
    p = draw(rng, 4)
    m = ts.build_m(p)
    for j, lam in enumerate(p.lambdas):
        for k, mu in enumerate(p.mus):
            assert m[j, k] == w.psi(lam, mu, p.eta)
    flipped = ts.build_m(ModelParameters(p.eta, p.xi, p.lambdas, tuple(-m for m in p.mus)))
    assert np.allclose(flipped, m, rtol=1e-13, atol=0)
    with pytest.raises(SingularKernel):
        ts.build_m(ModelParameters(0.4, 1.2, (0.6,), (0.6,)))


def test_n1_formula():
    p = ModelParameters(0.4, 1.2, (0.6,), (0.15,))
    res = ts.z_det(p)
    assert res.value == pytest.approx(np.sin(1.2) * w.kappa_minus(0.15, 1.2) * np.sin(0.8), rel=1e-14)
    assert res.value == pytest.approx(res.prefactor * res.det_M)


@pytest.mark.parametrize("N", range(2, 7))
def test_matches_oracle(rng, N):
    for _ in range(5):
        p = draw(rng, N)
        assert rel(ts.z_det(p).value, oa.z_oracle(p)) <= 1e-9


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.permutations(range(4)))
def test_symmetric_in_rows(seed, perm):
    p = validation.random_params(np.random.default_rng(seed), 4)
    assert rel(ts.z_det(p.permuted(lam_order=perm)).value, ts.z_det(p).value) <= 1e-10


def test_coincident_rows_rejected():
    p = ModelParameters(0.4, 1.2, (0.6, 0.6 + 1e-12), (0.1, 0.2))
    with pytest.raises(CoincidentParameters):
        ts.z_det(p)
    with pytest.raises(CoincidentParameters):
        ts.z_recursion_residual(p)


@pytest.mark.parametrize("N", [2, 3, 4])
def test_recursion(rng, N):
    for _ in range(5):
        p = draw(rng, N)
        assert ts.z_recursion_residual(p) <= 1e-9
    p = draw(rng, N)
    r1 = ts.z_recursion_residual(p)
    r2 = ts.z_recursion_residual(p.permuted(lam_order=list(range(N))[::-1]))
    assert abs(r1 - r2) <= 1e-9


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_ratio_against_two_determinants(rng, N):
    p = draw(rng, N)
    for i in range(1, N + 1):
        direct = ts.z_det(p.reduced(i)).value / ts.z_det(p).value
        assert rel(ts.z_ratio(p, i), direct) <= 1e-9
    with pytest.raises(IndexOutOfRange):
        ts.z_ratio(p, N + 1)


def test_ratio_n2_by_hand(rng):
    p = draw(rng, 2)
    m = ts.build_m(p)
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    assert minor_det(m, [0], [1]) == m[1, 0]
    assert rel(ts.z_ratio(p, 1), ts.z_det(p.reduced(1)).value / ts.z_det(p).value) <= 1e-12
    assert abs(det - ts.z_det(p).det_M) <= 1e-12 * abs(det)
