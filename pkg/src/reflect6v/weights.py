"""Trigonometric Boltzmann weights, R- and K-matrices, reflection-algebra
coefficients and vacuum eigenvalues.

Every function accepts complex scalars; the purely algebraic ones also accept
:class:`~reflect6v.jets.Jet` arguments so the homogeneous-limit code can
differentiate them.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import SingularAlgebraCoefficient, SingularBoundary, SingularKernel
from .jets import Jet, is_mp, sin, value_of

TOL_SINGULAR = 1e-10

# default demo point: every weight strictly positive
DEMO_ETA = 0.4
DEMO_XI = 1.2
DEMO_LAMBDA = 0.6
DEMO_MU = 0.15


def _scalar(x):
    return x if is_mp(x) else complex(x)


def _guard(x, what, exc=SingularAlgebraCoefficient, tol=TOL_SINGULAR):
    if abs(value_of(x)) < tol:
        raise exc(f"{what} vanishes ({value_of(x)!r})")
    return x


@dataclass(frozen=True)
class ModelParameters:
    """Crossing parameter ``eta``, boundary parameter ``xi`` and the
    inhomogeneities ``lambdas`` (double rows) and ``mus`` (columns)."""

    eta: complex
    xi: complex
    lambdas: tuple
    mus: tuple
    tol_singular: float = field(default=TOL_SINGULAR, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "eta", _scalar(self.eta))
        object.__setattr__(self, "xi", _scalar(self.xi))
        object.__setattr__(self, "lambdas", tuple(_scalar(x) for x in self.lambdas))
        object.__setattr__(self, "mus", tuple(_scalar(x) for x in self.mus))
        if len(self.lambdas) != len(self.mus) or not self.lambdas:
            raise ValueError("lambdas and mus must have the same length N >= 1")
        if abs(sin(self.xi)) < self.tol_singular:
            raise SingularBoundary("sin(xi) vanishes")
        for lam in self.lambdas:
            if abs(sin(2 * lam)) < self.tol_singular:
                raise SingularAlgebraCoefficient(f"sin(2*lambda) vanishes at lambda={lam}")

    @classmethod
    def homogeneous(cls, lam, mu, N, eta=DEMO_ETA, xi=DEMO_XI, **kw):
        return cls(eta, xi, (lam,) * N, (mu,) * N, **kw)

    @property
    def N(self) -> int:
        return len(self.lambdas)

    @property
    def c(self) -> complex:
        return sin(2 * self.eta)

    @property
    def extended(self) -> bool:
        return is_mp(self.eta)

    def to_mp(self) -> "ModelParameters":
        """Same parameters as mpmath scalars at the current ``mpmath.mp.dps``."""
        conv = lambda x: mpmath.mpc(complex(x).real, complex(x).imag)
        return ModelParameters(conv(self.eta), conv(self.xi), tuple(map(conv, self.lambdas)),
                               tuple(map(conv, self.mus)), self.tol_singular)

    @property
    def delta(self) -> complex:
        return delta_param(self.eta)

    def reduced(self, i: int) -> "ModelParameters":
        """Drop row ``lambda_i`` (1-based) and the last column ``mu_N``."""
        lams = self.lambdas[: i - 1] + self.lambdas[i:]
        return ModelParameters(self.eta, self.xi, lams, self.mus[:-1], self.tol_singular)

    def permuted(self, lam_order=None, mu_order=None) -> "ModelParameters":
        lams = self.lambdas if lam_order is None else tuple(self.lambdas[k] for k in lam_order)
        mus = self.mus if mu_order is None else tuple(self.mus[k] for k in mu_order)
        return ModelParameters(self.eta, self.xi, lams, mus, self.tol_singular)


class BoltzmannWeights(NamedTuple):
    a_plus: complex
    a_minus: complex
    b_plus: complex
    b_minus: complex
    c: complex


# elementary weights ------------------------------------------------------

def a(u, eta):
    return sin(u + 2 * eta)


def b(u):
    return sin(u)


def a_plus(x, y, eta):
    return sin(x + y + 2 * eta)


def a_minus(x, y, eta):
    return sin(x - y + 2 * eta)


def b_plus(x, y):
    return sin(x + y)


def b_minus(x, y):
    return sin(x - y)


def c_weight(eta):
    return sin(2 * eta)


def boltzmann(lam, mu, eta) -> BoltzmannWeights:
    return BoltzmannWeights(
        a_plus(lam, mu, eta), a_minus(lam, mu, eta), b_plus(lam, mu), b_minus(lam, mu), c_weight(eta)
    )


def delta_param(eta, probe=(0.37 + 0.11j, 0.05 - 0.02j)) -> complex:
    """Anisotropy ``(a^2 + b^2 - c^2) / (2ab)`` at a regular probe point."""
    u = probe[0] - probe[1]
    if is_mp(eta):
        u = mpmath.mpc(u)
    av, bv, cv = a(u, eta), b(u), c_weight(eta)
    return (av * av + bv * bv - cv * cv) / (2 * av * bv)


def kappa_plus(lam, xi):
    return sin(xi + lam) / sin(xi)


def kappa_minus(lam, xi):
    return sin(xi - lam) / sin(xi)


def h(lam, eta):
    """``c / a(2 lambda)``, the shift in ``D~ = D - h A``."""
    return c_weight(eta) / _guard(a(2 * lam, eta), "a(2*lambda)")


# matrices ------------------------------------------------------------------

def r_matrix(u, eta) -> np.ndarray:
    """4x4 R-matrix on (aux x site), basis order up-up, up-down, down-up, down-down."""
    av, bv, cv = cmath.sin(u + 2 * eta), cmath.sin(u), cmath.sin(2 * eta)
    return np.array(
        [[av, 0, 0, 0], [0, bv, cv, 0], [0, cv, bv, 0], [0, 0, 0, av]], dtype=complex
    )


def k_matrix(lam, xi, tol=TOL_SINGULAR) -> np.ndarray:
    if abs(cmath.sin(xi)) < tol:
        raise SingularBoundary("sin(xi) vanishes")
    return np.diag([kappa_plus(lam, xi), kappa_minus(lam, xi)]).astype(complex)


def check_yang_baxter(lambda1, lambda2, eta) -> float:
    """Max-norm residual of R12(l1-l2) R13(l1) R23(l2) = R23(l2) R13(l1) R12(l1-l2)."""
    eye = np.eye(2)
    swap23 = np.kron(eye, _swap())
    r12 = np.kron(r_matrix(lambda1 - lambda2, eta), eye)
    r23 = np.kron(eye, r_matrix(lambda2, eta))
    r13 = swap23 @ np.kron(r_matrix(lambda1, eta), eye) @ swap23
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return float(np.max(np.abs(lhs - rhs)))


def check_reflection(lambda1, lambda2, eta, xi) -> float:
    """Residual of R(l1-l2) K1(l1) R(l1+l2) K2(l2) = K2(l2) R(l1+l2) K1(l1) R(l1-l2)."""
    eye = np.eye(2)
    k1 = np.kron(k_matrix(lambda1, xi), eye)
    k2 = np.kron(eye, k_matrix(lambda2, xi))
    rm, rp = r_matrix(lambda1 - lambda2, eta), r_matrix(lambda1 + lambda2, eta)
    lhs = rm @ k1 @ rp @ k2
    rhs = k2 @ rp @ k1 @ rm
    return float(np.max(np.abs(lhs - rhs)))


def _swap():
    p = np.zeros((4, 4))
    p[0, 0] = p[3, 3] = p[1, 2] = p[2, 1] = 1.0
    return p


# reflection-algebra coefficients ---------------------------------------------

def f1(x, y, eta):
    return a_minus(x, y, eta) * b_plus(x, y) / (b_minus(x, y) * a_plus(x, y, eta))


def f2(x, y, eta):
    c = c_weight(eta)
    return -c * b_plus(x, y) / (b_minus(x, y) * a_plus(x, y, eta)) - c * h(x, eta) / a_plus(x, y, eta)


def f3(x, y, eta):
    return -c_weight(eta) / a_plus(x, y, eta)


def _one_minus_c2_over(w, eta):
    c = c_weight(eta)
    return 1 - c * c / (w * w)


def g1(x, y, eta):
    ap = a_plus(x, y, eta)
    return a_minus(x, y, eta) * ap / (b_minus(x, y) * b_plus(x, y)) * _one_minus_c2_over(ap, eta)


def g2(x, y, eta):
    c = c_weight(eta)
    ap = a_plus(x, y, eta)
    return (
        -c * ap / (b_minus(x, y) * b_plus(x, y)) * _one_minus_c2_over(ap, eta)
        + c * h(x, eta) / a_plus(y, x, eta)
    )


def g3(x, y, eta):
    c = c_weight(eta)
    am = a_minus(x, y, eta)
    bm = b_minus(x, y)
    return (
        h(y, eta) * (g2(x, y, eta) - c * h(x, eta) / a_plus(y, x, eta))
        - h(x, eta) * f2(y, x, eta)
        + c * am * am / (a_plus(x, y, eta) * bm * bm) * _one_minus_c2_over(am, eta)
    )


class ReflectionCoefficients(NamedTuple):
    f1: complex
    f2: complex
    f3: complex
    g1: complex
    g2: complex
    g3: complex
    h1: complex
    h2: complex


def reflection_coeffs(lambda1, lambda2, params: ModelParameters) -> ReflectionCoefficients:
    eta, tol = params.eta, params.tol_singular
    _guard(b_minus(lambda1, lambda2), "b_-(lambda1, lambda2)", tol=tol)
    _guard(b_plus(lambda1, lambda2), "b_+(lambda1, lambda2)", tol=tol)
    _guard(a_plus(lambda1, lambda2, eta), "a_+(lambda1, lambda2)", tol=tol)
    _guard(a_minus(lambda2, lambda1, eta), "a_-(lambda2, lambda1)", tol=tol)
    _guard(a(2 * lambda1, eta), "a(2*lambda1)", tol=tol)
    _guard(a(2 * lambda2, eta), "a(2*lambda2)", tol=tol)
    return ReflectionCoefficients(
        f1(lambda1, lambda2, eta),
        f2(lambda1, lambda2, eta),
        f3(lambda1, lambda2, eta),
        g1(lambda1, lambda2, eta),
        g2(lambda1, lambda2, eta),
        g3(lambda1, lambda2, eta),
        h(lambda1, eta),
        h(lambda2, eta),
    )


# vacuum eigenvalues --------------------------------------------------------

class VacuumEigenvalues(NamedTuple):
    beta: complex
    zeta: complex
    alpha_plus: complex
    alpha_minus: complex
    delta_plus: complex
    delta_minus: complex


def column_products(lam, mus: Sequence, eta):
    """``(alpha_+, alpha_-, delta_+, delta_-)`` over the given columns."""
    ap = am = dp = dm = 1.0
    for mu in mus:
        ap = ap * a_plus(lam, mu, eta)
        am = am * a_minus(lam, mu, eta)
        dp = dp * b_plus(lam, mu)
        dm = dm * b_minus(lam, mu)
    return ap, am, dp, dm


def vacuum_eigenvalues(lam, params: ModelParameters, exclude_last=False) -> VacuumEigenvalues:
    """Eigenvalues of the Sklyanin A and D~ on the all-up state.

    With ``exclude_last`` the products run over the first N-1 columns only.
    """
    mus = params.mus[:-1] if exclude_last else params.mus
    ap, am, dp, dm = column_products(lam, mus, params.eta)
    kp, km = kappa_plus(lam, params.xi), kappa_minus(lam, params.xi)
    beta = kp * ap * am
    zeta = (km - h(lam, params.eta) * kp) * dp * dm
    return VacuumEigenvalues(beta, zeta, ap, am, dp, dm)


def psi(lam, mu, eta, tol=TOL_SINGULAR):
    """Tsuchiya kernel ``c / (a_+ a_- b_+ b_-)``."""
    den = a_plus(lam, mu, eta) * a_minus(lam, mu, eta) * b_plus(lam, mu) * b_minus(lam, mu)
    if abs(value_of(den)) < tol:
        raise SingularKernel(f"psi denominator vanishes at lambda={value_of(lam)}, mu={value_of(mu)}")
    return c_weight(eta) / den
