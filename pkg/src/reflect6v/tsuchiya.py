"""Tsuchiya determinant for the reflecting-end partition function."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import weights as w
from .errors import CoincidentParameters, IndexOutOfRange, SingularKernel
from .linalg import det, minor_det
from .weights import ModelParameters


@dataclass(frozen=True)
class PartitionResult:
    value: complex
    prefactor: complex
    det_M: complex
    M: np.ndarray


def build_m(params: ModelParameters) -> np.ndarray:
    N, eta = params.N, params.eta
    m = np.empty((N, N), dtype=object if params.extended else complex)
    for j, lam in enumerate(params.lambdas):
        for k, mu in enumerate(params.mus):
            try:
                m[j, k] = w.psi(lam, mu, eta, params.tol_singular)
            except SingularKernel as exc:
                raise SingularKernel(f"M[{j + 1},{k + 1}]: {exc}") from None
    return m


def check_distinct(params: ModelParameters):
    tol = params.tol_singular
    for (j, x), (k, y) in combinations(enumerate(params.lambdas, 1), 2):
        if abs(w.b_minus(x, y)) < tol or abs(w.a_plus(x, y, params.eta)) < tol:
            raise CoincidentParameters(f"lambda_{j} and lambda_{k} coincide (or a_+ vanishes)")
    for (m, x), (n, y) in combinations(enumerate(params.mus, 1), 2):
        if abs(w.b_minus(x, y)) < tol or abs(w.b_plus(x, y)) < tol:
            raise CoincidentParameters(f"mu_{m} and mu_{n} coincide up to sign")


def z_prefactor(params: ModelParameters) -> complex:
    eta, xi = params.eta, params.xi
    lams, mus = params.lambdas, params.mus
    num = 1.0 + 0.0j
    for lam in lams:
        for mu in mus:
            num *= w.a_plus(lam, mu, eta) * w.a_minus(lam, mu, eta) * w.b_plus(lam, mu) * w.b_minus(lam, mu)
    den = 1.0 + 0.0j
    for k, j in combinations(range(params.N), 2):
        den *= w.a_plus(lams[j], lams[k], eta) * w.b_minus(lams[j], lams[k])
        den *= w.b_plus(mus[k], mus[j]) * w.b_minus(mus[k], mus[j])
    edge = 1.0 + 0.0j
    for lam, mu in zip(lams, mus):
        edge *= w.b(2 * lam) * w.kappa_minus(mu, xi)
    return num / den * edge


def z_det(params: ModelParameters) -> PartitionResult:
    check_distinct(params)
    m = build_m(params)
    d = det(m)
    pre = z_prefactor(params)
    return PartitionResult(pre * d, pre, d, m)


def z_ratio(params: ModelParameters, i: int, M=None) -> complex:
    """``Z_{N-1}[lambda_i; mu_N] / Z_N`` from minors of M (``i`` is 1-based)."""
    N, eta = params.N, params.eta
    if not 1 <= i <= N:
        raise IndexOutOfRange(f"row index {i} outside 1..{N}")
    if N < 2:
        raise IndexOutOfRange("the ratio needs N >= 2")
    check_distinct(params)
    m = build_m(params) if M is None else M
    lams, mus = params.lambdas, params.mus
    li, mu_n = lams[i - 1], mus[-1]
    ap, am, dp, dm = w.column_products(li, mus[:-1], eta)
    value = (-1) ** (i - 1) / (w.b(2 * li) * w.kappa_minus(mu_n, params.xi) * ap * am * dp * dm)
    for j, lj in enumerate(lams, 1):
        value *= w.psi(lj, mu_n, eta) / params.c
        if j != i:
            value *= w.a_plus(lj, li, eta) * w.b_minus(lj, li)
    for mu in mus[:-1]:
        value *= w.b_plus(mu, mu_n) * w.b_minus(mu, mu_n)
    return value * minor_det(m, [i - 1], [N - 1]) / det(m)


def z_recursion_sum(params: ModelParameters) -> complex:
    """Right-hand side of the Z_N recursion in terms of Z_{N-1} on reduced lattices."""
    from .correlations import s_g

    N, eta = params.N, params.eta
    mu_n = params.mus[-1]
    pre = params.c
    for lam in params.lambdas:
        pre *= w.a_minus(lam, mu_n, eta) * w.b_plus(lam, mu_n)
    total = 0.0j
    for i in range(1, N + 1):
        total += s_g(params, i, N) * z_det(params.reduced(i)).value
    return pre * total


def z_recursion_residual(params: ModelParameters) -> float:
    if params.N < 2:
        raise IndexOutOfRange("the recursion needs N >= 2")
    z = z_det(params).value
    return abs(z - z_recursion_sum(params)) / abs(z)
