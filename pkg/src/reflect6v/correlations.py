"""Inhomogeneous boundary correlations: polarization G, c-vertex probability H
and the emptiness formation probability F, by determinant, recursion and
explicit-sum formulas."""
from __future__ import annotations

from itertools import permutations
from typing import Callable, NamedTuple

import numpy as np

from . import weights as w
from .errors import DivisionByZeroPartition, IndexOutOfRange, SizeCap, SingularAuxFunction
from .jets import value_of
from .linalg import det, minor_det
from .tsuchiya import build_m, check_distinct, z_det, z_ratio
from .weights import ModelParameters

S_CAP = 6


def _check_rs(params, r, s=1):
    N = params.N
    if not 1 <= r <= N:
        raise IndexOutOfRange(f"r={r} outside 1..{N}")
    if not 1 <= s <= N:
        raise IndexOutOfRange(f"s={s} outside 1..{N}")


def _guard(x, what, tol):
    if abs(value_of(x)) < tol:
        raise SingularAuxFunction(f"{what} vanishes")
    return x


# recursion weights -------------------------------------------------------

def _xy(lam_r, mu_n, eta):
    """Coefficients of A_1 and D~_1 in <down|_N B(lam_r) |up>_N."""
    x = w.b_minus(lam_r, mu_n) + w.b_plus(lam_r, mu_n) * w.h(lam_r, eta)
    return x, w.b_plus(lam_r, mu_n)


def s_g(params: ModelParameters, i: int, r: int) -> complex:
    """Weight of ``Z_{N-1}[lambda_i; mu_N]`` in the G recursion (1-based i <= r)."""
    eta, lams, mu_n = params.eta, params.lambdas, params.mus[-1]
    li = lams[i - 1]
    ev = w.vacuum_eigenvalues(li, params, exclude_last=True)
    x, _ = _xy(li, mu_n, eta)
    pf1 = pg1 = 1.0 + 0.0j
    for j in range(1, r + 1):
        if j != i:
            pf1 *= w.f1(lams[j - 1], li, eta)
            pg1 *= w.g1(li, lams[j - 1], eta)
    am = w.a_minus(li, mu_n, eta)
    return x / (am * w.b_plus(li, mu_n)) * ev.beta * pf1 + ev.zeta / am * pg1


def s_h(params: ModelParameters, i: int, r: int) -> complex:
    """Weight of ``Z_{N-1}[lambda_i; mu_N]`` in the H recursion.

    For ``i < r`` this is the exchange-term weight; ``i == r`` is the direct
    vacuum term of the A_1 and D~_1 actions.
    """
    eta, lams, mu_n = params.eta, params.lambdas, params.mus[-1]
    li, lr = lams[i - 1], lams[r - 1]
    x, y = _xy(lr, mu_n, eta)
    ev = w.vacuum_eigenvalues(li, params, exclude_last=True)
    others = [lams[j - 1] for j in range(1, r) if j != i]
    pf1 = np.prod([w.f1(lj, li, eta) for lj in others]) if others else 1.0
    pg1 = np.prod([w.g1(li, lj, eta) for lj in others]) if others else 1.0
    if i == r:
        return x * ev.beta * pf1 + y * ev.zeta * pg1
    s1 = (x * w.f2(li, lr, eta) + y * w.g3(lr, li, eta)) * ev.beta * pf1
    s2 = (x * w.f3(li, lr, eta) + y * w.g2(lr, li, eta)) * ev.zeta * pg1
    return s1 + s2


def _row_products(params, r, mu):
    """``prod_{j<=r} a_- b_+ (l_j, mu)`` and ``prod_{j>r} a_+ b_- (l_j, mu)``."""
    eta = params.eta
    low = high = 1.0 + 0.0j
    for j, lam in enumerate(params.lambdas, 1):
        if j <= r:
            low *= w.a_minus(lam, mu, eta) * w.b_plus(lam, mu)
        else:
            high *= w.a_plus(lam, mu, eta) * w.b_minus(lam, mu)
    return low, high


def h_recursion(params: ModelParameters, r: int) -> complex:
    _check_rs(params, r)
    N, eta, mu_n = params.N, params.eta, params.mus[-1]
    lams = params.lambdas
    pre = params.c
    for j in range(1, N + 1):
        lam = lams[j - 1]
        if j < r:
            pre *= w.a_minus(lam, mu_n, eta) * w.b_plus(lam, mu_n)
        elif j > r:
            pre *= w.a_plus(lam, mu_n, eta) * w.b_minus(lam, mu_n)
    if N == 1:
        return pre * s_h(params, 1, 1) / z_det(params).value
    m = build_m(params)
    return pre * sum(s_h(params, i, r) * z_ratio(params, i, m) for i in range(1, r + 1))


def g_recursion(params: ModelParameters, r: int) -> complex:
    _check_rs(params, r)
    low, high = _row_products(params, r, params.mus[-1])
    pre = params.c * low * high
    if params.N == 1:
        return pre * s_g(params, 1, 1) / z_det(params).value
    m = build_m(params)
    return pre * sum(s_g(params, i, r) * z_ratio(params, i, m) for i in range(1, r + 1))


def f_recursion(params: ModelParameters, r: int, s: int) -> complex:
    """EFP through the recursion on ``F_{N-1}^{(r-1, s-1)}[lambda_i; mu_N]``."""
    _check_rs(params, r, s)
    if s == 1:
        return g_recursion(params, r)
    if s > r:
        # r double rows flip exactly r column spins
        return 0.0j
    low, high = _row_products(params, r, params.mus[-1])
    pre = params.c * low * high
    m = build_m(params)
    total = 0.0j
    for i in range(1, r + 1):
        sub = params.reduced(i)
        total += s_g(params, i, r) * z_ratio(params, i, m) * f_recursion(sub, r - 1, s - 1)
    return pre * total


# auxiliary functions u_r, t_r -----------------------------------------------

class AuxFunctions(NamedTuple):
    """The scalar functions of one (params, r) pair, as callables of lambda."""

    u1: Callable
    u2: Callable
    t1: Callable
    t2: Callable
    u: Callable
    t: Callable
    s_g: Callable
    s_h: Callable


def aux_functions(params: ModelParameters, r: int) -> AuxFunctions:
    _check_rs(params, r)
    return AuxFunctions(
        lambda x: u_parts(x, params, r)[0],
        lambda x: u_parts(x, params, r)[1],
        lambda x: t_parts(x, params, r)[0],
        lambda x: t_parts(x, params, r)[1],
        lambda x: eval_u(x, params, r),
        lambda x: eval_t(x, params, r),
        lambda i: s_g(params, i, r),
        lambda i: s_h(params, i, r),
    )


def _aux_common(lam, params, r):
    """Shared pieces of u_r and t_r at spectral value ``lam`` (scalar or jet)."""
    eta, xi, lams = params.eta, params.xi, params.lambdas
    c, delta = params.c, params.delta
    ap1, am1, dp1, dm1 = w.column_products(lam, params.mus[:-1], eta)
    b2, a2 = w.b(2 * lam), w.a(2 * lam, eta)
    high = low1 = low2 = 1.0
    for j, lj in enumerate(lams, 1):
        if j > r:
            high = high * (w.a_plus(lj, lam, eta) * w.b_minus(lj, lam))
        else:
            low1 = low1 * (w.a_minus(lj, lam, eta) * w.b_plus(lj, lam))
            low2 = low2 * (w.a_minus(lam, lj, eta) * (w.b_plus(lam, lj) - 2 * delta * w.a_plus(lam, lj, eta)))
    kp, km = w.kappa_plus(lam, xi), w.kappa_minus(lam, xi)
    one = kp / (c * b2 * b2 * dp1 * dm1) * high * low1
    two = (km - kp * w.h(lam, eta)) / (c * b2 * _guard(b2 - 2 * delta * a2, "b(2l) - 2 Delta a(2l)", params.tol_singular) * ap1 * am1) * high * low2
    return one, two


def t_parts(lam, params: ModelParameters, r: int):
    """``(t_{r,1}(lam), t_{r,2}(lam))``."""
    mu_n, eta = params.mus[-1], params.eta
    one, two = _aux_common(lam, params, r)
    x = w.b_minus(lam, mu_n) + w.b_plus(lam, mu_n) * w.h(lam, eta)
    return one * x, two * w.b_plus(lam, mu_n)


def eval_t(lam, params: ModelParameters, r: int):
    mu_n, eta = params.mus[-1], params.eta
    t1, t2 = t_parts(lam, params, r)
    den = _guard(w.a_minus(lam, mu_n, eta) * w.b_plus(lam, mu_n), "a_-(l, mu_N) b_+(l, mu_N)", params.tol_singular)
    return (t1 + t2) / den


def u_parts_raw(lam, params: ModelParameters, r: int):
    """``(u_{r,1}, u_{r,2})`` exactly as written with f, g coefficients; 0/0 at ``lam = lambda_r``."""
    eta, lr, mu_n = params.eta, params.lambdas[r - 1], params.mus[-1]
    x, y = _xy(lr, mu_n, eta)
    one, two = _aux_common(lam, params, r)
    u1 = (x * w.f2(lam, lr, eta) + y * w.g3(lr, lam, eta)) / w.f1(lr, lam, eta) * one
    u2 = (x * w.f3(lam, lr, eta) + y * w.g2(lr, lam, eta)) / w.g1(lam, lr, eta) * two
    return u1, u2


def u_parts(lam, params: ModelParameters, r: int):
    """``(u_{r,1}(lam), u_{r,2}(lam))`` with the removable pole at ``lam = lambda_r``
    cancelled analytically, so jets and ``lam = lambda_r`` are both fine."""
    eta, lr, mu_n = params.eta, params.lambdas[r - 1], params.mus[-1]
    c = params.c
    x, y = _xy(lr, mu_n, eta)
    one, two = _aux_common(lam, params, r)
    hl, hr = w.h(lam, eta), w.h(lr, eta)
    ap = w.a_plus(lr, lam, eta)
    bp = w.b_plus(lr, lam)
    bm = w.b_minus(lr, lam)
    dressing = 1 - c * c / (ap * ap)
    # b_-(l_r, l) * f2(l, l_r) and b_-(l_r, l) * g3(l_r, l)
    f2_reg = c * bp / ap - c * hl * bm / ap
    g3_reg = (
        -hl * c * ap / bp * dressing
        - hr * (c * bp / ap - c * hl * bm / ap)
        + c * w.sin(lr - lam + 4 * eta) / ap
    )
    u1 = (x * f2_reg + y * g3_reg) * ap / (w.a_minus(lr, lam, eta) * bp) * one
    # b_-(l, l_r) * [x f3(l, l_r) + y g2(l_r, l)] and b_-(l, l_r) * g1(l, l_r)
    num2 = -x * c / ap * (-bm) + y * (c * ap / bp * dressing - c * hr * bm / ap)
    g1_reg = w.a_minus(lam, lr, eta) * ap / bp * dressing
    u2 = num2 / g1_reg * two
    return u1, u2


def eval_u(lam, params: ModelParameters, r: int):
    u1, u2 = u_parts(lam, params, r)
    return u1 + u2


# determinant representations ---------------------------------------------------

def _mu_products(params, k):
    """``prod_{m<k} b_+ b_- (mu_m, mu_k)`` (1-based k)."""
    mus = params.mus
    out = 1.0 + 0.0j
    for mu in mus[: k - 1]:
        out *= w.b_plus(mu, mus[k - 1]) * w.b_minus(mu, mus[k - 1])
    return out


def _column_prefactor(params, r, k, pivot_high=False):
    """Reciprocal row products for column ``mu_k``, as in the G and F prefactors."""
    eta, mu = params.eta, params.mus[k - 1]
    den = 1.0 + 0.0j
    for j, lam in enumerate(params.lambdas, 1):
        if j <= r:
            den *= w.a_plus(lam, mu, eta) * w.b_minus(lam, mu)
        else:
            den *= w.a_minus(lam, mu, eta) * w.b_plus(lam, mu)
    return 1.0 / den


def _replace_last_column(m, column):
    out = np.array(m)
    out[:, -1] = column
    return out


def _det_m(params):
    check_distinct(params)
    m = build_m(params)
    d = det(m)
    # near-confluent parameters make det M legitimately tiny; only a true zero is fatal
    if d == 0 or not np.isfinite(complex(d)):
        raise DivisionByZeroPartition(f"det M = {complex(d):.3e}")
    return m, d


def h_det(params: ModelParameters, r: int) -> complex:
    _check_rs(params, r)
    N, eta, xi = params.N, params.eta, params.xi
    mu_n, lams = params.mus[-1], params.lambdas
    m, d = _det_m(params)
    u = [eval_u(lam, params, r) for lam in lams]
    den = 1.0 + 0.0j
    for j, lam in enumerate(lams, 1):
        if j < r:
            den *= w.a_plus(lam, mu_n, eta) * w.b_minus(lam, mu_n)
        elif j > r:
            den *= w.a_minus(lam, mu_n, eta) * w.b_plus(lam, mu_n)
    pre = w.psi(lams[r - 1], mu_n, eta) / w.kappa_minus(mu_n, xi) * (-1) ** (N + 1) * _mu_products(params, N) / den
    return pre * det(_replace_last_column(m, u)) / d


def g_det(params: ModelParameters, r: int) -> complex:
    _check_rs(params, r)
    N = params.N
    m, d = _det_m(params)
    t = [eval_t(lam, params, r) for lam in params.lambdas]
    pre = params.c / w.kappa_minus(params.mus[-1], params.xi) * (-1) ** (N + 1)
    pre *= _mu_products(params, N) * _column_prefactor(params, r, N)
    return pre * det(_replace_last_column(m, t)) / d


# emptiness formation probability ------------------------------------------------

def theta(i, j):
    return 1 if i > j else 0


def chi_1(li, lj, mu_a, mu_b, eta):
    """Dressing of t_{r,1}(lambda_j) when row lambda_i and column mu_a are removed."""
    num = w.b_minus(lj, mu_b) + w.b_plus(lj, mu_b) * w.h(lj, eta)
    den = w.b_minus(lj, mu_a) + w.b_plus(lj, mu_a) * w.h(lj, eta)
    return num / den * w.b_plus(lj, mu_b) * w.b_minus(lj, mu_b) / (w.a_minus(li, lj, eta) * w.b_plus(li, lj))


def chi_2(li, lj, mu_a, mu_b, eta, delta):
    first = w.b_plus(lj, mu_b) / w.b_plus(lj, mu_a)
    second = w.a_plus(lj, mu_b, eta) * w.a_minus(lj, mu_b, eta)
    return first * second / (w.a_minus(lj, li, eta) * (w.b_plus(lj, li) - 2 * delta * w.a_plus(lj, li, eta)))


def efp_prefactor(params: ModelParameters, r: int, s: int) -> complex:
    N, xi = params.N, params.xi
    pre = 1.0 + 0.0j
    for k in range(N - s + 1, N + 1):
        pre *= (-1) ** (k + 1) * params.c / w.kappa_minus(params.mus[k - 1], xi)
        pre *= _mu_products(params, k) * _column_prefactor(params, r, k)
    return pre


def efp_integrand(lams_sel, params: ModelParameters, r: int):
    """Product of dressed t factors and a_+ b_- cross factors for an ordered
    selection of spectral values (scalars or jets)."""
    N, eta, delta = params.N, params.eta, params.delta
    mus = params.mus
    s = len(lams_sel)
    parts = [t_parts(x, params, r) for x in lams_sel]
    total = 1.0
    for i in range(1, s + 1):
        xi_ = lams_sel[i - 1]
        t1, t2 = parts[i - 1]
        d1 = d2 = 1.0
        for k in range(1, i):
            xk = lams_sel[k - 1]
            d1 = d1 * chi_1(xk, xi_, mus[N - k], mus[N - k - 1], eta)
            d2 = d2 * chi_2(xk, xi_, mus[N - k], mus[N - k - 1], eta, delta)
        mu_i = mus[N - i]
        total = total * ((t1 * d1 + t2 * d2) / (w.a_minus(xi_, mu_i, eta) * w.b_plus(xi_, mu_i)))
        for k in range(i + 1, s + 1):
            mu_k = mus[N - k]
            total = total * (w.a_plus(xi_, mu_k, eta) * w.b_minus(xi_, mu_k))
    return total


def f_sum(params: ModelParameters, r: int, s: int, s_cap=S_CAP) -> complex:
    """EFP as the explicit sum over ordered tuples of distinct rows."""
    _check_rs(params, r, s)
    if s > s_cap:
        raise SizeCap(f"s={s} exceeds the explicit-sum cap {s_cap}")
    N = params.N
    m, d = _det_m(params)
    cols = list(range(N - s, N))
    total = 0.0j
    for tup in permutations(range(1, N + 1), s):
        sign = sum(j + N for j in tup) + sum(theta(tup[a], tup[b]) for a in range(s) for b in range(a + 1, s))
        mdet = minor_det(m, [j - 1 for j in tup], cols)
        if mdet == 0:
            continue
        lam_sel = [params.lambdas[j - 1] for j in tup]
        total += (-1) ** sign * mdet * efp_integrand(lam_sel, params, r)
    return efp_prefactor(params, r, s) * total / d
