import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reflect6v import weights as w
from reflect6v.errors import SingularAlgebraCoefficient, SingularBoundary, SingularKernel
from reflect6v.weights import ModelParameters

real = st.floats(-1.5, 1.5, allow_nan=False)
cplx = st.builds(complex, real, st.floats(-0.5, 0.5))


def test_boltzmann_at_origin():
    eta = 0.37
    bw = w.boltzmann(0.0, 0.0, eta)
    assert bw.a_plus == bw.a_minus == pytest.approx(np.sin(2 * eta))
    assert bw.b_plus == bw.b_minus == 0
    assert bw.c == pytest.approx(np.sin(2 * eta))


def test_b_minus_vanishes_on_diagonal():
    assert w.boltzmann(0.71, 0.71, 0.4).b_minus == 0


def test_boltzmann_demo_values():
    lam, mu, eta = 0.6, 0.15, 0.4
    bw = w.boltzmann(lam, mu, eta)
    expected = [np.sin(lam + mu + 2 * eta), np.sin(lam - mu + 2 * eta), np.sin(lam + mu), np.sin(lam - mu), np.sin(2 * eta)]
    assert np.allclose(list(bw), expected, rtol=0, atol=1e-15)


def test_delta_special_values():
    assert abs(w.delta_param(np.pi / 4)) < 1e-12
    assert abs(w.delta_param(1e-6) - 1) < 1e-10
    assert w.delta_param(0.4) == pytest.approx(np.cos(0.8), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(cplx, cplx)
def test_delta_probe_invariance(x, y):
    eta = 0.4 + 0.05j
    if abs(np.sin(x - y)) < 1e-2 or abs(np.sin(x - y + 2 * eta)) < 1e-2:
        return
    assert abs(w.delta_param(eta, (x, y)) - w.delta_param(eta)) <= 1e-12 * max(1.0, abs(w.delta_param(eta)))


def test_r_matrix_structure():
    eta = 0.3
    r0 = w.r_matrix(0.0, eta)
    c = np.sin(2 * eta)
    # at zero spectral parameter a = c and b = 0: c times the swap
    assert np.allclose(r0, c * np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))
    r = w.r_matrix(0.7, eta)
    assert r[1, 2] == r[2, 1] == pytest.approx(c)


@settings(max_examples=100, deadline=None)
@given(cplx, cplx, st.floats(0.05, 1.0))
def test_yang_baxter(l1, l2, eta):
    assert w.check_yang_baxter(l1, l2, eta) <= 1e-12


def test_yang_baxter_degenerate_cases():
    assert w.check_yang_baxter(0.4, 0.4, 0.3) <= 1e-14
    assert w.check_yang_baxter(0.4, -0.2, 0.0) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(cplx, cplx, st.floats(0.05, 1.0), st.floats(0.3, 2.5))
def test_reflection_equation(l1, l2, eta, xi):
    assert w.check_reflection(l1, l2, eta, xi) <= 1e-12


def test_reflection_degenerate_cases():
    assert w.check_reflection(0.3, 0.3, 0.4, 1.2) <= 1e-14
    assert w.check_reflection(0.3, -0.5, 0.0, 1.2) <= 1e-12


def test_k_matrix():
    assert np.allclose(w.k_matrix(0.0, 1.2), np.eye(2))
    assert abs(w.k_matrix(1.2, 1.2)[1, 1]) < 1e-15
    assert w.kappa_plus(0.0, 0.9) == w.kappa_minus(0.0, 0.9) == 1
    with pytest.raises(SingularBoundary):
        w.k_matrix(0.3, 0.0)


def test_h_times_a_is_c():
    for lam in (0.2, 0.6 + 0.1j, -1.1):
        assert w.h(lam, 0.4) * w.a(2 * lam, 0.4) == pytest.approx(w.c_weight(0.4), abs=1e-15)


def test_reflection_coeffs_guard():
    p = ModelParameters.homogeneous(0.3, 0.1, 2)
    with pytest.raises(SingularAlgebraCoefficient, match="b_-"):
        w.reflection_coeffs(0.5, 0.5, p)
    co = w.reflection_coeffs(0.5, 0.2, p)
    assert co.h1 == pytest.approx(w.h(0.5, p.eta)) and co.h2 == pytest.approx(w.h(0.2, p.eta))


def test_vacuum_eigenvalues_empty_products():
    p = ModelParameters(0.4, 1.2, (0.6,), (0.15,))
    ev = w.vacuum_eigenvalues(0.33, p, exclude_last=True)
    assert ev.beta == pytest.approx(w.kappa_plus(0.33, 1.2))
    assert ev.alpha_plus == ev.alpha_minus == ev.delta_plus == ev.delta_minus == 1


def test_psi():
    lam, mu, eta = 0.6, 0.15, 0.4
    direct = np.sin(2 * eta) / (np.sin(lam + mu + 2 * eta) * np.sin(lam - mu + 2 * eta) * np.sin(lam + mu) * np.sin(lam - mu))
    assert w.psi(lam, mu, eta) == pytest.approx(direct, rel=1e-14)
    assert w.psi(lam, -mu, eta) == pytest.approx(w.psi(lam, mu, eta), rel=1e-14)
    with pytest.raises(SingularKernel):
        w.psi(0.6, 0.6 + 1e-12, eta)


def test_model_parameters_validation():
    with pytest.raises(ValueError):
        ModelParameters(0.4, 1.2, (0.1, 0.2), (0.3,))
    with pytest.raises(SingularBoundary):
        ModelParameters(0.4, cmath.pi, (0.1,), (0.3,))
    with pytest.raises(SingularAlgebraCoefficient):
        ModelParameters(0.4, 1.2, (0.0,), (0.3,))
    p = ModelParameters(0.4, 1.2, (0.5, 0.6, 0.7), (0.1, 0.2, 0.3))
    red = p.reduced(2)
    assert red.lambdas == (0.5, 0.7) and red.mus == (0.1, 0.2)
