"""Moments of ``c * psi``, the monic polynomials ``P_n`` and constants ``J_n``
built from moment determinants, and the reduced s x s forms of F, G and H."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import factorial

import numpy as np

from . import correlations as co
from . import weights as w
from .errors import DegenerateMoments, IndexOutOfRange
from .homogeneous import HomogeneousPoint, _pair_weights, _variables, derivative_table, efp_jet, psi_jet
from .jets import Jet
from .linalg import det, minor_det


@dataclass(frozen=True)
class MomentTable:
    point: HomogeneousPoint
    n: int
    m: np.ndarray  # m[j, k] = d_lam^j d_mu^k (c psi), 0-based

    def leading_minor(self, k) -> complex:
        return det(self.m[:k, :k])


@dataclass(frozen=True)
class PolynomialFamily:
    """``P[n]`` holds the monomial coefficients of P_n, lowest degree first."""

    P: tuple
    J: tuple

    def V(self, n) -> np.ndarray:
        return factorial(n) / self.J[n] * self.P[n]

    def __len__(self):
        return len(self.P)


def moments(point: HomogeneousPoint, n: int) -> MomentTable:
    c = w.c_weight(point.eta)
    table = derivative_table(psi_jet(point, n - 1, n - 1, scale=c), n)
    return MomentTable(point, n, table)


def polynomials(table: MomentTable, tol=1e-300) -> PolynomialFamily:
    m, n = table.m, table.n
    minors = [1.0 + 0.0j] + [table.leading_minor(k) for k in range(1, n + 1)]
    for k, d in enumerate(minors[1:], 1):
        if abs(d) <= tol or not np.isfinite(d):
            raise DegenerateMoments(f"leading {k}x{k} moment minor vanishes")
    J = tuple(minors[k + 1] / minors[k] for k in range(n))
    P = []
    for deg in range(n):
        size = deg + 1
        border = m[:size, :deg]
        coeffs = np.empty(size, dtype=complex)
        # bordered determinant expanded along its last column (1, x, ..., x^deg)
        for i in range(size):
            rows = [q for q in range(size) if q != i]
            coeffs[i] = (-1) ** (i + deg) * (det(border[rows]) if deg else 1.0)
        P.append(coeffs / minors[deg])
    return PolynomialFamily(tuple(P), J)


def bordered_det(table: MomentTable, xs) -> complex:
    """Left side of the bordered identity: moment columns then columns (x^0..x^{n-1})."""
    n, l = table.n, len(xs)
    mat = np.empty((n, n), dtype=complex)
    mat[:, : n - l] = table.m[:n, : n - l]
    for q, x in enumerate(xs):
        mat[:, n - l + q] = [x**j for j in range(n)]
    return det(mat)


def bordered_rhs(table: MomentTable, family: PolynomialFamily, xs) -> complex:
    n, l = table.n, len(xs)
    jprod = np.prod(family.J[: n - l]) if n > l else 1.0
    mat = np.array([[np.polyval(family.P[d][::-1], x) for x in xs] for d in range(n - l, n)])
    return jprod * det(mat)


def apply_polynomial_det(rows, integrand: Jet) -> complex:
    """``det[rows[i](d/d e_{s-j})]`` applied to an s-variable jet at the origin.

    ``rows[i]`` are monomial coefficient vectors; column j acts on variable
    ``e_{s-j}`` (0-based j), matching the reversed variable order of the
    operator columns.
    """
    s = len(rows)
    deriv = integrand.coeffs.copy()
    for ax in range(s):
        fac = np.array([factorial(k) for k in range(deriv.shape[ax])], dtype=float)
        shape = [1] * s
        shape[ax] = -1
        deriv = deriv * fac.reshape(shape)
    total = 0.0j
    for perm in permutations(range(s)):
        sign = _parity(perm)
        # row i sits in column perm[i], i.e. acts on variable s-1-perm[i]
        tensor = deriv
        var_poly = [None] * s
        for i in range(s):
            var_poly[s - 1 - perm[i]] = rows[i]
        for ax in reversed(range(s)):
            poly = var_poly[ax]
            k = min(len(poly), tensor.shape[ax])
            tensor = np.tensordot(tensor.take(range(k), axis=ax), poly[:k], axes=([ax], [0]))
        total += sign * complex(tensor)
    return total


def _parity(perm):
    inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
    return -1 if inv % 2 else 1


def _family(point, N):
    return polynomials(moments(point, N))


def polynomial_rows(family: PolynomialFamily, N: int, s: int) -> list:
    """Rows V_{N-s} .. V_{N-1} of the s x s EFP determinant."""
    return [family.V(n) for n in range(N - s, N)]


def _poly_prefactor(point, N, r, s):
    apbm, ambp = _pair_weights(point)
    c = w.c_weight(point.eta)
    pre = 1.0 + 0.0j
    for k in range(N - s + 1, N + 1):
        pre *= c * c / w.kappa_minus(point.mu, point.xi) * w.b(2 * point.mu) ** (k - 1)
        pre /= ambp ** (N - r) * apbm**r
    return pre


def f_poly(point: HomogeneousPoint, N: int, r: int, s: int, family: PolynomialFamily | None = None) -> complex:
    if not 1 <= r <= N or not 1 <= s <= N:
        raise IndexOutOfRange(f"(r, s) = ({r}, {s}) outside 1..{N}")
    if s > r:
        return 0.0j
    point = point.with_n(N)
    family = family or _family(point, N)
    rows = polynomial_rows(family, N, s)
    return _poly_prefactor(point, N, r, s) * apply_polynomial_det(rows, efp_jet(point, N, r, s))


def g_poly(point: HomogeneousPoint, N: int, r: int, family: PolynomialFamily | None = None) -> complex:
    if not 1 <= r <= N:
        raise IndexOutOfRange(f"r={r} outside 1..{N}")
    point = point.with_n(N)
    family = family or _family(point, N)
    (eps,) = _variables(point, 1, N)
    t = co.eval_t(eps, point.params(), r)
    return _poly_prefactor(point, N, r, 1) * apply_polynomial_det([family.V(N - 1)], t)


def h_integrand(point: HomogeneousPoint, N: int, r: int) -> Jet:
    """Bracketed integrand whose V_{N-1} image gives H (the G(r) - G(r-1) difference)."""
    params = point.with_n(N).params()
    eta, lam, mu = point.eta, point.lam, point.mu
    (eps,) = _variables(point, 1, N)
    t1, t2 = co.t_parts(eps, params, r)
    # 1/f1(lam, mu) and the pole-free reciprocals 1/f1(lam, lam+e), 1/g1(lam+e, lam)
    inv_f1_mu = w.b_minus(lam, mu) * w.a_plus(lam, mu, eta) / (w.a_minus(lam, mu, eta) * w.b_plus(lam, mu))
    inv_f1_eps = w.b_minus(lam, eps) * w.a_plus(lam, eps, eta) / (w.a_minus(lam, eps, eta) * w.b_plus(lam, eps))
    ap = w.a_plus(eps, lam, eta)
    c = w.c_weight(eta)
    inv_g1_eps = w.b_minus(eps, lam) * w.b_plus(eps, lam) / (w.a_minus(eps, lam, eta) * ap * (1 - c * c / (ap * ap)))
    den = w.a_minus(eps, mu, eta) * w.b_plus(eps, mu)
    return (t1 * (1 - inv_f1_mu * inv_f1_eps) + t2 * (1 - inv_f1_mu * inv_g1_eps)) / den


def h_poly(point: HomogeneousPoint, N: int, r: int, family: PolynomialFamily | None = None) -> complex:
    if not 1 <= r <= N:
        raise IndexOutOfRange(f"r={r} outside 1..{N}")
    point = point.with_n(N)
    family = family or _family(point, N)
    return _poly_prefactor(point, N, r, 1) * apply_polynomial_det([family.V(N - 1)], h_integrand(point, N, r))


def z_poly(point: HomogeneousPoint, N: int, family: PolynomialFamily | None = None) -> complex:
    """Partition function from ``det Mbar = c^-N prod J_n``."""
    from .homogeneous import z_hom_from_det

    point = point.with_n(N)
    family = family or _family(point, N)
    return z_hom_from_det(point, N, mbar_from_j(family, point.eta))


def mbar_from_j(family: PolynomialFamily, eta) -> complex:
    n = len(family)
    return np.prod(family.J) / w.c_weight(eta) ** n
