"""Brute-force operator oracle on the 2^N dimensional quantum space.

Monodromies are applied matrix-free to arrays of shape ``(2, 2, ..., 2, batch)``:
axis 0 is the auxiliary space, axes 1..N are the columns (site 1 first), the
last axis is a batch of vectors.  Spin up is basis index 0.

    T(l)  = R_N(l - mu_N) ... R_1(l - mu_1)
    T~(l) = R_1(l + mu_1) ... R_N(l + mu_N)
    U(l)  = T(l) K(l) T~(l) = [[A, B], [C, D]]
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import weights as w
from .errors import DivisionByZeroPartition, IndexOutOfRange, MemoryBudget
from .weights import ModelParameters

N_CAP = 10
_UP, _DOWN = 0, 1


def _check_cap(N, cap):
    if N > cap:
        raise MemoryBudget(f"N={N} exceeds the oracle cap {cap}")


def _apply_r(state, site, u, eta):
    """Apply R_{aux, site}(u) to ``state`` (site is 1-based)."""
    r = w.r_matrix(u, eta).reshape(2, 2, 2, 2)
    out = np.tensordot(r, state, axes=([2, 3], [0, site]))
    # tensordot puts (aux', site') first; move site' back into place
    return np.moveaxis(out, 1, site)


def _apply_k(state, lam, xi):
    kp, km = w.kappa_plus(lam, xi), w.kappa_minus(lam, xi)
    out = np.array(state)
    out[_UP] *= kp
    out[_DOWN] *= km
    return out


def apply_t(state, lam, params: ModelParameters):
    for k in range(1, params.N + 1):
        state = _apply_r(state, k, lam - params.mus[k - 1], params.eta)
    return state


def apply_t_tilde(state, lam, params: ModelParameters):
    for k in range(params.N, 0, -1):
        state = _apply_r(state, k, lam + params.mus[k - 1], params.eta)
    return state


def apply_u(state, lam, params: ModelParameters):
    state = apply_t_tilde(state, lam, params)
    state = _apply_k(state, lam, params.xi)
    return apply_t(state, lam, params)


def _blocks(apply, N):
    dim = 2**N
    blocks = np.empty((2, 2, dim, dim), dtype=complex)
    for beta in (_UP, _DOWN):
        state = np.zeros((2, dim, dim), dtype=complex)
        state[beta] = np.eye(dim)
        out = apply(state.reshape((2,) + (2,) * N + (dim,)))
        blocks[:, beta] = out.reshape(2, dim, dim)
    return blocks


@dataclass(frozen=True)
class OperatorFamily:
    """Entries of one monodromy matrix as dense 2^N x 2^N operators."""

    N: int
    kind: str
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    h: complex = 0.0

    @property
    def D_tilde(self):
        return self.D - self.h * self.A

    def as_matrix(self):
        """Full (aux x quantum) matrix with the auxiliary space as the slow index."""
        return np.block([[self.A, self.B], [self.C, self.D]])


def build_monodromy(lam, params: ModelParameters, kind="sklyanin", cap=N_CAP) -> OperatorFamily:
    _check_cap(params.N, cap)
    apply = {
        "plain": lambda s: apply_t(s, lam, params),
        "tilde": lambda s: apply_t_tilde(s, lam, params),
        "sklyanin": lambda s: apply_u(s, lam, params),
    }[kind]
    blk = _blocks(apply, params.N)
    hv = w.h(lam, params.eta) if kind == "sklyanin" else 0.0
    return OperatorFamily(params.N, kind, blk[0, 0], blk[0, 1], blk[1, 0], blk[1, 1], hv)


def build_sklyanin(lam, params: ModelParameters, cap=N_CAP) -> OperatorFamily:
    return build_monodromy(lam, params, "sklyanin", cap)


# states and projectors -------------------------------------------------------

def all_up(N):
    v = np.zeros(2**N, dtype=complex)
    v[0] = 1.0
    return v


def all_down(N):
    v = np.zeros(2**N, dtype=complex)
    v[-1] = 1.0
    return v


def site_projector(N, site, kind):
    """``p_site`` (kind='p', spin up) or ``q_site`` (kind='q') as a dense matrix."""
    if not 1 <= site <= N:
        raise IndexOutOfRange(f"site {site} outside 1..{N}")
    local = np.diag([1.0, 0.0]) if kind == "p" else np.diag([0.0, 1.0])
    return np.kron(np.kron(np.eye(2 ** (site - 1)), local), np.eye(2 ** (N - site)))


def _project_vec(vec, N, sites, kind):
    t = np.array(vec).reshape((2,) * N)
    keep = _UP if kind == "p" else _DOWN
    for site in sites:
        idx = [slice(None)] * N
        idx[site - 1] = 1 - keep
        t[tuple(idx)] = 0.0
    return t.reshape(-1)


def apply_b(vec, lam, params: ModelParameters):
    """Sklyanin B(lam) applied to a quantum-space vector (matrix-free)."""
    N = params.N
    state = np.zeros((2, vec.size, 1), dtype=complex)
    state[_DOWN, :, 0] = vec
    out = apply_u(state.reshape((2,) + (2,) * N + (1,)), lam, params)
    return out.reshape(2, -1)[_UP]


def bethe_vector(lams: Sequence, params: ModelParameters):
    """``B(lams[-1]) ... B(lams[0]) |up...up>``."""
    v = all_up(params.N)
    for lam in lams:
        v = apply_b(v, lam, params)
    return v


# definitional correlations -----------------------------------------------------

def _sandwich(params: ModelParameters, r, insert):
    """<down| B(l_N)..B(l_{r+1}) insert(B(l_r)..B(l_1)|up>)."""
    v = insert(bethe_vector(params.lambdas[:r], params))
    for lam in params.lambdas[r:]:
        v = apply_b(v, lam, params)
    return complex(v[-1])


def z_oracle(params: ModelParameters, cap=N_CAP) -> complex:
    _check_cap(params.N, cap)
    return complex(bethe_vector(params.lambdas, params)[-1])


def _check_r(r, N, lo=1):
    if not lo <= r <= N:
        raise IndexOutOfRange(f"index {r} outside {lo}..{N}")


def _normalised(params, value, cap):
    z = z_oracle(params, cap)
    if abs(z) < params.tol_singular:
        raise DivisionByZeroPartition(f"|Z_N| = {abs(z):.3e}")
    return value / z


def g_oracle(params: ModelParameters, r: int, cap=N_CAP) -> complex:
    N = params.N
    _check_cap(N, cap)
    _check_r(r, N)
    value = _sandwich(params, r, lambda v: _project_vec(v, N, [N], "q"))
    return _normalised(params, value, cap)


def h_oracle(params: ModelParameters, r: int, cap=N_CAP) -> complex:
    N = params.N
    _check_cap(N, cap)
    _check_r(r, N)

    def insert(_):
        v = bethe_vector(params.lambdas[: r - 1], params)
        v = _project_vec(v, N, [N], "p")
        v = apply_b(v, params.lambdas[r - 1], params)
        return _project_vec(v, N, [N], "q")

    return _normalised(params, _sandwich(params, r, insert), cap)


def f_oracle(params: ModelParameters, r: int, s: int, cap=N_CAP) -> complex:
    N = params.N
    _check_cap(N, cap)
    _check_r(r, N)
    _check_r(s, N)
    sites = list(range(N - s + 1, N + 1))
    value = _sandwich(params, r, lambda v: _project_vec(v, N, sites, "q"))
    return _normalised(params, value, cap)


# algebraic identities -------------------------------------------------------------

def _rel(lhs, rhs):
    scale = max(np.max(np.abs(lhs)), np.max(np.abs(rhs)), 1.0)
    return float(np.max(np.abs(lhs - rhs)) / scale)


def check_commutation(lambda1, lambda2, params: ModelParameters) -> dict:
    """Relative residuals of the B-B, C-C, A-B and D~-B exchange relations."""
    u1, u2 = build_sklyanin(lambda1, params), build_sklyanin(lambda2, params)
    co = w.reflection_coeffs(lambda1, lambda2, params)
    ab = u2.A @ u1.B
    ab_rhs = co.f1 * u1.B @ u2.A + co.f2 * u2.B @ u1.A + co.f3 * u2.B @ u1.D_tilde
    db = u1.D_tilde @ u2.B
    db_rhs = co.g1 * u2.B @ u1.D_tilde + co.g2 * u1.B @ u2.D_tilde + co.g3 * u1.B @ u2.A
    return {
        "BB": _rel(u1.B @ u2.B, u2.B @ u1.B),
        "CC": _rel(u1.C @ u2.C, u2.C @ u1.C),
        "AB": _rel(ab, ab_rhs),
        "DB": _rel(db, db_rhs),
    }


def _embed_aux(fam: OperatorFamily, slot):
    """Operator U_slot acting on aux1 x aux2 x quantum."""
    dim = 2**fam.N
    blocks = [[fam.A, fam.B], [fam.C, fam.D]]
    out = np.zeros((4 * dim, 4 * dim), dtype=complex)
    for a1 in range(2):
        for b1 in range(2):
            unit = np.zeros((2, 2))
            unit[a1, b1] = 1.0
            if slot == 1:
                out += np.kron(np.kron(unit, np.eye(2)), blocks[a1][b1])
            else:
                out += np.kron(np.kron(np.eye(2), unit), blocks[a1][b1])
    return out


def check_reflection_u(lambda1, lambda2, params: ModelParameters) -> float:
    """Relative residual of the reflection equation obeyed by the Sklyanin monodromy."""
    dim = 2**params.N
    u1 = _embed_aux(build_sklyanin(lambda1, params), 1)
    u2 = _embed_aux(build_sklyanin(lambda2, params), 2)
    rm = np.kron(w.r_matrix(lambda1 - lambda2, params.eta), np.eye(dim))
    rp = np.kron(w.r_matrix(lambda1 + lambda2, params.eta), np.eye(dim))
    return _rel(rm @ u1 @ rp @ u2, u2 @ rp @ u1 @ rm)


def check_offshell_actions(params: ModelParameters, r: int, lam=0.31 + 0.07j) -> float:
    """Residual of the A and D~ actions on B(l_r)..B(l_1)|up> against their expansions."""
    N, eta = params.N, params.eta
    _check_r(r, N, lo=0)
    lams = params.lambdas[:r]
    u = build_sklyanin(lam, params)
    state = bethe_vector(lams, params)
    ev = w.vacuum_eigenvalues(lam, params)

    def ev_at(x):
        return w.vacuum_eigenvalues(x, params)

    a_rhs = ev.beta * np.prod([w.f1(x, lam, eta) for x in lams]) * state
    d_rhs = ev.zeta * np.prod([w.g1(lam, x, eta) for x in lams]) * state
    for i, li in enumerate(lams):
        others = lams[:i] + lams[i + 1 :]
        ei = ev_at(li)
        pf1 = np.prod([w.f1(x, li, eta) for x in others])
        pg1 = np.prod([w.g1(li, x, eta) for x in others])
        vec = bethe_vector((lam,) + others, params)
        a_rhs = a_rhs + (ei.beta * w.f2(li, lam, eta) * pf1 + ei.zeta * w.f3(li, lam, eta) * pg1) * vec
        d_rhs = d_rhs + (ei.zeta * w.g2(lam, li, eta) * pg1 + ei.beta * w.g3(lam, li, eta) * pf1) * vec
    return max(_rel(u.A @ state, a_rhs), _rel(u.D_tilde @ state, d_rhs))
