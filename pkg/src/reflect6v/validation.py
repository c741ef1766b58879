"""The cross-validation matrix behind ``reflect6v verify`` and the acceptance tests.

Each check returns a :class:`CheckResult` holding the worst deviation seen,
the tolerance it is held to and the individual comparisons.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import biorthogonal as bo
from . import correlations as co
from . import homogeneous as hg
from . import oracle_algebraic as oa
from . import oracle_enumeration as oe
from . import tsuchiya as ts
from . import weights as w
from .homogeneous import HomogeneousPoint
from .weights import ModelParameters

DEMO_POINT = HomogeneousPoint(w.DEMO_LAMBDA, w.DEMO_MU, w.DEMO_ETA, w.DEMO_XI)
RICHARDSON_DELTAS = (1e-2, 5e-3, 2.5e-3)
RICHARDSON_DIGITS = 50
EXTENDED_DIGITS = 30
# real grids cost up to ~1e-8 in double at N = 5, which would swamp the 1e-10 slack
PHYSICAL_EXTENDED_FROM_N = 5


@dataclass
class Comparison:
    N: int
    r: int
    s: int
    quantity: str
    method: str
    value: complex
    ref_method: str | None = None
    ref_value: complex | None = None
    dev: float = 0.0


@dataclass
class CheckResult:
    key: str
    title: str
    tol: float
    worst: float = 0.0
    rows: list = field(default_factory=list)
    elapsed: float = 0.0
    budget: float | None = None

    @property
    def passed(self) -> bool:
        within = np.isfinite(self.worst) and self.worst <= self.tol
        return bool(within and (self.budget is None or self.elapsed <= self.budget))

    def add(self, row: Comparison):
        self.rows.append(row)
        self.worst = max(self.worst, row.dev) if np.isfinite(row.dev) else float("inf")

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        timing = f", {self.elapsed:.2f}s" + (f" of {self.budget:.0f}s" if self.budget else "")
        return f"[{status}] {self.key} {self.title}: worst {self.worst:.3e} vs tol {self.tol:.0e}{timing}"


def rel(a, b) -> float:
    return float(abs(a - b) / abs(b)) if b != 0 else float(abs(a))


def scaled(a, b) -> float:
    """Absolute deviation for O(1) probabilities, relative for larger values."""
    return float(abs(a - b) / max(1.0, abs(b)))


# parameter draws ---------------------------------------------------------------

def _separated(params: ModelParameters, floor=0.02) -> bool:
    eta = params.eta
    lams, mus = params.lambdas, params.mus
    vals = [w.c_weight(eta), w.b(params.xi)]
    vals += [w.b(2 * lam) for lam in lams] + [w.a(2 * lam, eta) for lam in lams]
    for lam in lams:
        for mu in mus:
            vals += [w.a_plus(lam, mu, eta), w.a_minus(lam, mu, eta), w.b_plus(lam, mu), w.b_minus(lam, mu)]
        vals += [w.kappa_minus(lam, params.xi), w.kappa_plus(lam, params.xi)]
    for j, x in enumerate(lams):
        for y in lams[j + 1:]:
            vals += [w.b_minus(x, y), w.a_plus(x, y, eta), w.a_minus(x, y, eta), w.a_minus(y, x, eta)]
    for j, x in enumerate(mus):
        for y in mus[j + 1:]:
            vals += [w.b_minus(x, y), w.b_plus(x, y)]
        vals.append(w.kappa_minus(x, params.xi))
    return min(abs(complex(v)) for v in vals) > floor


REAL_DRAW_MAX_N = 4


def random_params(rng: np.random.Generator, N: int, complex_part=None) -> ModelParameters:
    """Generic draw with every relevant sine bounded away from zero.

    Complex draws separate rows (and columns) along the imaginary axis, which
    keeps the Cauchy-like matrices well conditioned at any N.  Real draws
    must fit all 2N inhomogeneities into one period on jittered grids, which
    costs digits quickly, so they are used up to ``REAL_DRAW_MAX_N`` only.
    ``complex_part`` of None picks at random where both kinds are allowed.
    """
    if complex_part is None:
        complex_part = N > REAL_DRAW_MAX_N or bool(rng.integers(2))
    for _ in range(100):
        if complex_part:
            eta = rng.uniform(0.2, 0.45) + 0.05j * rng.normal()
            xi = rng.uniform(1.5, 2.0) + 0.05j * rng.normal()
            t = rng.permutation(0.35 * np.arange(N) + rng.uniform(0, 0.05, N))
            u = rng.permutation(0.1 + 0.35 * np.arange(N) + rng.uniform(0, 0.05, N)) * rng.choice([-1, 1])
            lams = rng.uniform(0.4, 0.9, N) + 1j * (t - t.mean())
            mus = rng.uniform(-0.3, 0.3, N) + 1j * u
            params = ModelParameters(eta, xi, tuple(lams), tuple(mus))
        else:
            params = _real_grid(rng, N)
        if _separated(params):
            return params
    raise RuntimeError("could not draw well-separated parameters")


def _real_grid(rng, N):
    eta = rng.uniform(0.35, 0.45)
    xi = rng.uniform(1.3, 1.8)
    lams = rng.permutation(0.5 + 0.15 * np.arange(N) + rng.uniform(0, 0.03, N))
    mus = rng.permutation(0.03 + 0.1 * np.arange(N) + rng.uniform(0, 0.02, N))
    return ModelParameters(eta, xi, tuple(lams), tuple(mus))


def physical_params(rng: np.random.Generator, N: int) -> ModelParameters:
    """Real draw with all vertex and turn weights strictly positive."""
    for _ in range(100):
        params = _real_grid(rng, N)
        if _positive(params) and _separated(params):
            return params
    raise RuntimeError("could not draw positive weights")


def _positive(params: ModelParameters) -> bool:
    eta, xi = params.eta, params.xi
    for lam in params.lambdas:
        for mu in params.mus:
            for v in (w.a_plus(lam, mu, eta), w.a_minus(lam, mu, eta), w.b_plus(lam, mu), w.b_minus(lam, mu)):
                if v.real <= 0:
                    return False
        if w.kappa_plus(lam, xi).real <= 0 or w.kappa_minus(lam, xi).real <= 0:
            return False
    return w.c_weight(eta).real > 0


# criteria ------------------------------------------------------------------

def _timed(fn):
    def run(*args, **kw):
        t0 = time.perf_counter()
        res = fn(*args, **kw)
        res.elapsed = time.perf_counter() - t0
        return res

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def check_partition(rng, n_max=6, draws=100, enum_max=3) -> CheckResult:
    res = CheckResult("1", "Z: determinant vs oracle and enumeration", 1e-9, budget=10.0)
    for N in range(1, n_max + 1):
        for _ in range(draws):
            p = random_params(rng, N)
            z = ts.z_det(p).value
            ref = oa.z_oracle(p)
            res.add(Comparison(N, 0, 0, "Z", "determinant", z, "oracle", ref, rel(z, ref)))
            if N <= enum_max:
                e = oe.enumerate_partition(p)
                # held to the tighter enumeration tolerance
                res.add(Comparison(N, 0, 0, "Z", "determinant", z, "enumeration", e, rel(z, e) * 10))
    return res


@_timed
def check_algebra(rng, draws=100, n_ops=3) -> CheckResult:
    res = CheckResult("2", "Yang-Baxter, reflection, exchange relations, off-shell actions", 1e-12)
    for _ in range(draws):
        l1, l2 = rng.normal(size=2) + 0.3j * rng.normal(size=2)
        eta, xi = rng.uniform(0.2, 0.6) + 0.1j * rng.normal(), rng.uniform(0.8, 1.4)
        res.add(Comparison(0, 0, 0, "YB", "residual", w.check_yang_baxter(l1, l2, eta), dev=w.check_yang_baxter(l1, l2, eta)))
        res.add(Comparison(0, 0, 0, "KRKR", "residual", w.check_reflection(l1, l2, eta, xi), dev=w.check_reflection(l1, l2, eta, xi)))
    # operator identities carry the looser 1e-9 tolerance; scale onto 1e-12
    for N in range(1, n_ops + 1):
        for _ in range(5):
            p = random_params(rng, N)
            l1, l2 = 0.37 + 0.05j, -0.21 + 0.11j
            devs = oa.check_commutation(l1, l2, p)
            devs["UU"] = oa.check_reflection_u(l1, l2, p)
            for r in range(0, N + 1):
                devs[f"offshell{r}"] = oa.check_offshell_actions(p, r)
            for name, d in devs.items():
                res.add(Comparison(N, 0, 0, name, "residual", d, dev=d * 1e-3))
    return res


@_timed
def check_recursions(rng, n_range=(2, 4), draws=25) -> CheckResult:
    res = CheckResult("3", "recursions for Z, H, G, F", 1e-9)
    for N in range(n_range[0], n_range[1] + 1):
        for _ in range(draws):
            p = random_params(rng, N)
            z, zr = oa.z_oracle(p), ts.z_recursion_sum(p)
            res.add(Comparison(N, 0, 0, "Z", "recursion", zr, "oracle", z, rel(zr, z)))
            for r in range(1, N + 1):
                for q, rec, ref in (("H", co.h_recursion, oa.h_oracle), ("G", co.g_recursion, oa.g_oracle)):
                    v, v0 = rec(p, r), ref(p, r)
                    res.add(Comparison(N, r, 0, q, "recursion", v, "oracle", v0, rel(v, v0)))
                for s in range(2, r + 1):
                    v, v0 = co.f_recursion(p, r, s), oa.f_oracle(p, r, s)
                    res.add(Comparison(N, r, s, "F", "recursion", v, "oracle", v0, rel(v, v0)))
    return res


@_timed
def check_determinants(rng, n_range=(2, 5), draws=5, s_max=4) -> CheckResult:
    res = CheckResult("4", "h_det, g_det, f_sum vs oracle and sum rules", 1e-9)
    for N in range(n_range[0], n_range[1] + 1):
        for _ in range(draws):
            p = random_params(rng, N)
            g = {0: 0.0}
            hsum = 0.0
            for r in range(1, N + 1):
                hv, gv = co.h_det(p, r), co.g_det(p, r)
                g[r] = gv
                hsum += hv
                res.add(Comparison(N, r, 0, "H", "determinant", hv, "oracle", oa.h_oracle(p, r), rel(hv, oa.h_oracle(p, r))))
                res.add(Comparison(N, r, 0, "G", "determinant", gv, "oracle", oa.g_oracle(p, r), rel(gv, oa.g_oracle(p, r))))
                for s in range(1, min(r, s_max) + 1):
                    fv, f0 = co.f_sum(p, r, s), oa.f_oracle(p, r, s)
                    res.add(Comparison(N, r, s, "F", "sum", fv, "oracle", f0, rel(fv, f0)))
                    if s == 1:
                        res.add(Comparison(N, r, 1, "F-G", "sum", fv, "determinant", gv, abs(fv - gv)))
                    if r == N:
                        res.add(Comparison(N, r, s, "F(N,s)", "sum", fv, "exact", 1.0, abs(fv - 1)))
            res.add(Comparison(N, N, 0, "G(N)", "determinant", g[N], "exact", 1.0, abs(g[N] - 1)))
            res.add(Comparison(N, 0, 0, "sum H", "determinant", hsum, "exact", 1.0, abs(hsum - 1)))
    return res


def richardson(values):
    """Eliminate the O(d) and O(d^2) terms from values at d, d/2, d/4."""
    f1, f2, f4 = values
    return (8 * f4 - 6 * f2 + f1) / 3


def near_homogeneous(point: HomogeneousPoint, N, delta) -> ModelParameters:
    lams = [point.lam + j * delta for j in range(1, N + 1)]
    mus = [point.mu + k * delta for k in range(1, N + 1)]
    return ModelParameters(point.eta, point.xi, lams, mus, tol_singular=1e-300)


def _extrapolated(point, N, fn, deltas=RICHARDSON_DELTAS, digits=RICHARDSON_DIGITS):
    # near-confluent determinants lose ~2(N-1) log10(1/delta) digits in double precision
    with mpmath.workdps(digits):
        vals = [fn(near_homogeneous(point, N, d).to_mp()) for d in deltas]
        return complex(richardson(vals))


@_timed
def check_homogeneous(point=DEMO_POINT, n_range=(2, 5), s_max=3) -> CheckResult:
    res = CheckResult("5a", "h_hom, g_hom, f_hom vs oracle at equal parameters", 1e-8)
    for N in range(n_range[0], n_range[1] + 1):
        pt = point.with_n(N)
        p = pt.params()
        for r in range(1, N + 1):
            for q, fn, ref in (("H", hg.h_hom, oa.h_oracle), ("G", hg.g_hom, oa.g_oracle)):
                v, v0 = fn(pt, N, r), ref(p, r)
                res.add(Comparison(N, r, 0, q, "homogeneous", v, "oracle", v0, scaled(v, v0)))
            for s in range(1, N + 1):
                v, v0 = hg.f_hom(pt, N, r, s), oa.f_oracle(p, r, s)
                # f is held to 1e-7
                res.add(Comparison(N, r, s, "F", "homogeneous", v, "oracle", v0, scaled(v, v0) / 10))
    return res


@_timed
def check_richardson(point=DEMO_POINT, n_range=(2, 5), s_max=3) -> CheckResult:
    res = CheckResult("5b", "homogeneous forms vs Richardson-extrapolated inhomogeneous ones", 1e-5)
    for N in range(n_range[0], n_range[1] + 1):
        pt = point.with_n(N)
        for r in range(1, N + 1):
            v = hg.h_hom(pt, N, r)
            e = _extrapolated(point, N, lambda p: co.h_det(p, r))
            res.add(Comparison(N, r, 0, "H", "homogeneous", v, "richardson", e, scaled(v, e)))
            v = hg.g_hom(pt, N, r)
            e = _extrapolated(point, N, lambda p: co.g_det(p, r))
            res.add(Comparison(N, r, 0, "G", "homogeneous", v, "richardson", e, scaled(v, e)))
            for s in range(2, min(r, s_max) + 1):
                v = hg.f_hom(pt, N, r, s)
                e = _extrapolated(point, N, lambda p: co.f_sum(p, r, s))
                res.add(Comparison(N, r, s, "F", "homogeneous", v, "richardson", e, scaled(v, e)))
    return res


@_timed
def check_biorthogonal(point=DEMO_POINT, n_range=(3, 6), s_max=3, g_range=(2, 6)) -> CheckResult:
    res = CheckResult("6", "biorthogonal s x s forms vs operator determinants", 1e-7)
    for N in range(min(n_range[0], g_range[0]), max(n_range[1], g_range[1]) + 1):
        pt = point.with_n(N)
        fam = bo.polynomials(bo.moments(pt, N))
        if n_range[0] <= N <= n_range[1]:
            for r in range(1, N + 1):
                for s in range(1, s_max + 1):
                    v, v0 = bo.f_poly(pt, N, r, s, fam), hg.f_hom(pt, N, r, s)
                    res.add(Comparison(N, r, s, "F", "biorthogonal", v, "homogeneous", v0, scaled(v, v0)))
        if g_range[0] <= N <= g_range[1]:
            # identities held to 1e-8 and 1e-9: scale onto the 1e-7 budget
            g = [0.0] + [bo.g_poly(pt, N, r, fam) for r in range(1, N + 1)]
            for r in range(1, N + 1):
                g0 = hg.g_hom(pt, N, r)
                res.add(Comparison(N, r, 0, "G", "biorthogonal", g[r], "homogeneous", g0, scaled(g[r], g0) * 10))
                hv = bo.h_poly(pt, N, r, fam)
                res.add(Comparison(N, r, 0, "H", "biorthogonal", hv, "G(r)-G(r-1)", g[r] - g[r - 1],
                                   scaled(hv, g[r] - g[r - 1]) * 10))
            res.add(Comparison(N, N, 0, "G(N)", "biorthogonal", g[N], "exact", 1.0, abs(g[N] - 1) * 10))
            dm, dj = hg_det(pt), bo.mbar_from_j(fam, pt.eta)
            res.add(Comparison(N, 0, 0, "detMbar", "prod J", dj, "determinant", dm, rel(dj, dm) * 100))
    return res


def hg_det(point):
    from .linalg import det

    return det(hg.build_mbar(point))


@_timed
def check_physical(rng, draws=50, n_range=(2, 5), s_max=4, slack=1e-10) -> CheckResult:
    res = CheckResult("7", "positive weights: probabilities in [0,1], monotone in r and s", slack)

    def outside(x):
        x = complex(x)
        return max(0.0, -x.real, x.real - 1.0, abs(x.imag))

    Ns = list(range(n_range[0], n_range[1] + 1))
    for k in range(draws):
        N = Ns[k % len(Ns)]
        p = physical_params(rng, N)
        if N < PHYSICAL_EXTENDED_FROM_N:
            _physical_rows(res, p, N, s_max, outside)
            continue
        with mpmath.workdps(EXTENDED_DIGITS):
            _physical_rows(res, p.to_mp(), N, s_max, outside)
    return res


def _physical_rows(res, p, N, s_max, outside):
    g_prev = 0.0
    for r in range(1, N + 1):
        hv, gv = complex(co.h_det(p, r)), complex(co.g_det(p, r))
        res.add(Comparison(N, r, 0, "H", "determinant", hv, dev=outside(hv)))
        res.add(Comparison(N, r, 0, "G", "determinant", gv, dev=outside(gv)))
        res.add(Comparison(N, r, 0, "dG", "determinant", gv - g_prev, dev=max(0.0, (g_prev - gv).real)))
        g_prev = gv
        f_prev = 1.0
        for s in range(1, min(r, s_max) + 1):
            fv = complex(co.f_sum(p, r, s))
            res.add(Comparison(N, r, s, "F", "sum", fv, dev=outside(fv)))
            res.add(Comparison(N, r, s, "dF", "sum", f_prev - fv, dev=max(0.0, (fv - f_prev).real)))
            f_prev = fv


def run_all(seed=0, n_max=5):
    """Full matrix with every N range clipped to ``n_max`` (the CLI default is 5)."""
    rng = np.random.default_rng(seed)

    def clip(lo, hi):
        return (lo, min(hi, n_max))

    results = [
        check_partition(rng, n_max=min(6, n_max)),
        check_algebra(rng),
        check_recursions(rng, clip(2, 4)),
        check_determinants(rng, clip(2, 5)),
        check_homogeneous(n_range=clip(2, 5)),
        check_richardson(n_range=clip(2, 5)),
        check_biorthogonal(n_range=clip(3, 6), g_range=clip(2, 6)),
        check_physical(rng, n_range=clip(2, 5)),
    ]
    return results
