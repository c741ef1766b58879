"""Homogeneous limit (all rows at ``lam``, all columns at ``mu``).

Derivatives come from jet arithmetic only.  Operator columns of the
Wronskian-like determinants are handled by a Laplace expansion: each
assignment of rows to operator columns pairs a minor of ``Mbar`` with a mixed
Taylor coefficient of the integrand.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from . import correlations as co
from . import weights as w
from .errors import IndexOutOfRange, TruncationTooShallow
from .jets import Jet
from .linalg import det, minor_det
from .weights import ModelParameters


@dataclass(frozen=True)
class HomogeneousPoint:
    lam: complex
    mu: complex
    eta: complex = w.DEMO_ETA
    xi: complex = w.DEMO_XI
    N: int = 1

    def params(self, N=None) -> ModelParameters:
        return ModelParameters.homogeneous(self.lam, self.mu, N or self.N, self.eta, self.xi)

    def with_n(self, N):
        return HomogeneousPoint(self.lam, self.mu, self.eta, self.xi, N)


def psi_jet(point: HomogeneousPoint, order_lambda, order_mu, scale=1.0) -> Jet:
    """Bivariate expansion of ``scale * psi(lam + e1, mu + e2)``."""
    orders = (order_lambda, order_mu)
    lam = Jet.variable(0, orders, point.lam)
    mu = Jet.variable(1, orders, point.mu)
    return w.psi(lam, mu, point.eta) * scale


def derivative_table(jet: Jet, n) -> np.ndarray:
    """``[d_lam^j d_mu^k f]`` for ``0 <= j, k < n``."""
    fac = np.array([factorial(k) for k in range(n)], dtype=float)
    return jet.coeffs[:n, :n] * np.outer(fac, fac)


def build_mbar(point: HomogeneousPoint, N=None) -> np.ndarray:
    N = N or point.N
    return derivative_table(psi_jet(point, N - 1, N - 1), N)


def _sign(rows, cols):
    """Sign of the Laplace term placing ``rows[i]`` in column ``cols[i]`` (0-based)."""
    inv = sum(1 for a in range(len(rows)) for b in range(a + 1, len(rows)) if rows[a] > rows[b])
    return (-1) ** (sum(rows) + sum(cols) + inv)


def operator_det_apply(mbar, s: int, integrand: Jet | complex) -> complex:
    """Evaluate the N x N determinant whose first N-s columns are those of
    ``mbar`` and whose column k > N-s holds ``d^{j-1}/d e_{N-k+1}^{j-1}``,
    applied to ``integrand`` at the origin."""
    mbar = np.asarray(mbar, dtype=complex)
    N = mbar.shape[0]
    if s == 0:
        return det(mbar)
    if not isinstance(integrand, Jet):
        integrand = Jet.constant(integrand, (N - 1,) * s)
    if integrand.nvars != s:
        raise ValueError(f"integrand has {integrand.nvars} variables, expected {s}")
    if min(integrand.orders) < N - 1:
        raise TruncationTooShallow(f"jet orders {integrand.orders} below {N - 1}")
    keep = list(range(N - s))
    op_cols = list(range(N - s, N))
    total = 0.0j
    for rows in permutations(range(N), s):
        # operator column N-s+q pairs with variable e_{s-q}; rows[q] is its row
        order = [0] * s
        for q, row in enumerate(rows):
            order[s - 1 - q] = row
        deriv = integrand.derivative(*order)
        if deriv == 0:
            continue
        sub = minor_det(mbar, rows, op_cols)
        total += _sign(rows, op_cols) * sub * deriv
    return total


def _variables(point, s, N):
    orders = (N - 1,) * s
    return [Jet.variable(i, orders, point.lam) for i in range(s)]


def _pair_weights(point):
    eta = point.eta
    apbm = w.a_plus(point.lam, point.mu, eta) * w.b_minus(point.lam, point.mu)
    ambp = w.a_minus(point.lam, point.mu, eta) * w.b_plus(point.lam, point.mu)
    return apbm, ambp


def _check(N, r, s=1):
    if not 1 <= r <= N or not 1 <= s <= N:
        raise IndexOutOfRange(f"(r, s) = ({r}, {s}) outside 1..{N}")


def h_hom(point: HomogeneousPoint, N: int, r: int) -> complex:
    _check(N, r)
    point = point.with_n(N)
    params = point.params()
    mbar = build_mbar(point)
    (eps,) = _variables(point, 1, N)
    u = co.eval_u(eps, params, r)
    apbm, ambp = _pair_weights(point)
    pre = factorial(N - 1) / det(mbar) * w.psi(point.lam, point.mu, point.eta)
    pre *= w.b(2 * point.mu) ** (N - 1) / (w.kappa_minus(point.mu, point.xi) * apbm ** (r - 1) * ambp ** (N - r))
    return pre * operator_det_apply(mbar, 1, u)


def g_hom(point: HomogeneousPoint, N: int, r: int) -> complex:
    _check(N, r)
    point = point.with_n(N)
    params = point.params()
    mbar = build_mbar(point)
    (eps,) = _variables(point, 1, N)
    t = co.eval_t(eps, params, r)
    apbm, ambp = _pair_weights(point)
    pre = factorial(N - 1) / det(mbar) * params.c
    pre *= w.b(2 * point.mu) ** (N - 1) / (w.kappa_minus(point.mu, point.xi) * apbm**r * ambp ** (N - r))
    return pre * operator_det_apply(mbar, 1, t)


def efp_jet(point: HomogeneousPoint, N: int, r: int, s: int) -> Jet:
    """Homogeneous EFP integrand as an s-variable jet of order N-1 per variable.

    Single-variable factors are expanded on univariate jets and the coupled
    dressing factors on bivariate jets before embedding, which keeps the number
    of full s-variable products quadratic in s.
    """
    params = point.with_n(N).params()
    eta, delta, mus = params.eta, params.delta, params.mus
    orders = (N - 1,) * s
    one_var = Jet.variable(0, (N - 1,), point.lam)
    two_var = (Jet.variable(0, (N - 1, N - 1), point.lam), Jet.variable(1, (N - 1, N - 1), point.lam))
    t1u, t2u = co.t_parts(one_var, params, r)
    t1 = [t1u.embed((i,), orders) for i in range(s)]
    t2 = [t2u.embed((i,), orders) for i in range(s)]
    total = Jet.constant(1.0, orders)
    for i in range(1, s + 1):
        d1 = t1[i - 1]
        d2 = t2[i - 1]
        for k in range(1, i):
            xk, xi_ = two_var
            c1 = co.chi_1(xk, xi_, mus[N - k], mus[N - k - 1], eta)
            c2 = co.chi_2(xk, xi_, mus[N - k], mus[N - k - 1], eta, delta)
            d1 = d1 * c1.embed((k - 1, i - 1), orders)
            d2 = d2 * c2.embed((k - 1, i - 1), orders)
        mu_i = mus[N - i]
        single = 1 / (w.a_minus(one_var, mu_i, eta) * w.b_plus(one_var, mu_i))
        for k in range(i + 1, s + 1):
            mu_k = mus[N - k]
            single = single * (w.a_plus(one_var, mu_k, eta) * w.b_minus(one_var, mu_k))
        total = total * ((d1 + d2) * single.embed((i - 1,), orders))
    return total


def efp_hom_prefactor(point: HomogeneousPoint, N, r, s) -> complex:
    apbm, ambp = _pair_weights(point)
    c = w.c_weight(point.eta)
    pre = 1.0 + 0.0j
    for k in range(N - s + 1, N + 1):
        pre *= c * factorial(k - 1) / w.kappa_minus(point.mu, point.xi)
        pre *= w.b(2 * point.mu) ** (k - 1) / (ambp ** (N - r) * apbm**r)
    return pre


def f_hom(point: HomogeneousPoint, N: int, r: int, s: int) -> complex:
    _check(N, r, s)
    if s > r:
        return 0.0j
    point = point.with_n(N)
    mbar = build_mbar(point)
    integrand = efp_jet(point, N, r, s)
    return efp_hom_prefactor(point, N, r, s) * operator_det_apply(mbar, s, integrand) / det(mbar)


def z_hom_from_det(point: HomogeneousPoint, N: int, det_mbar: complex) -> complex:
    """Homogeneous partition function given ``det Mbar``.

    The Cauchy-like denominators and the vanishing determinant share the
    Vandermonde factors in (lam_j - lam_k) and (mu_j - mu_k); cancelling them
    leaves ``det Mbar`` over the factorials.
    """
    lam, mu, eta = point.lam, point.mu, point.eta
    pair = w.a_plus(lam, mu, eta) * w.a_minus(lam, mu, eta) * w.b_plus(lam, mu) * w.b_minus(lam, mu)
    edge = w.b(2 * lam) * w.kappa_minus(mu, point.xi)
    npairs = N * (N - 1) // 2
    fact = 1.0
    for i in range(N):
        fact *= factorial(i) ** 2
    return (-1) ** npairs * pair ** (N * N) * edge**N * det_mbar / ((w.a(2 * lam, eta) * w.b(2 * mu)) ** npairs * fact)


def z_hom(point: HomogeneousPoint, N: int) -> complex:
    if N < 1:
        raise IndexOutOfRange(f"N={N} must be positive")
    return z_hom_from_det(point, N, det(build_mbar(point.with_n(N))))
