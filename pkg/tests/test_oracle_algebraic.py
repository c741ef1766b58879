from itertools import permutations

import numpy as np
import pytest

from conftest import draw, rel
from reflect6v import oracle_algebraic as oa
from reflect6v import weights as w
from reflect6v.errors import DivisionByZeroPartition, IndexOutOfRange, MemoryBudget
from reflect6v.weights import ModelParameters

# frozen from the operator oracle at the demo point, cross-checked by enumeration for N <= 3
Z_DEMO = {1: 0.6222513342675788, 2: 0.3698041972412396, 3: 0.20242959007981795, 4: 0.10102677616879628}
G_DEMO_4 = [0.10215242702555498, 0.40187737566544496, 0.7912076984866164, 1.0]


def test_n1_sklyanin_by_hand():
    p = ModelParameters(0.4 + 0.1j, 1.1, (0.37 - 0.05j,), (0.21,))
    lam = 0.52 + 0.03j
    u = oa.build_sklyanin(lam, p).as_matrix()
    # U = T K T~ on aux x site, T = R(lam - mu), T~ = R(lam + mu)
    rm, rp = w.r_matrix(lam - 0.21, p.eta), w.r_matrix(lam + 0.21, p.eta)
    k = np.kron(w.k_matrix(lam, p.xi), np.eye(2))
    assert np.max(np.abs(u - rm @ k @ rp)) <= 1e-14


def test_z1_closed_form():
    p = ModelParameters(0.4, 1.2, (0.6,), (0.15,))
    expected = np.sin(1.2) * w.kappa_minus(0.15, 1.2) * np.sin(0.8)
    assert oa.z_oracle(p) == pytest.approx(expected, rel=1e-14)


def test_frozen_demo_values(demo):
    for N, z in Z_DEMO.items():
        assert oa.z_oracle(demo.params(N)) == pytest.approx(z, rel=1e-12)
    p = demo.params(4)
    assert [oa.g_oracle(p, r).real for r in range(1, 5)] == pytest.approx(G_DEMO_4, rel=1e-12)


def test_bb_commute_and_reflection_u(rng):
    p = draw(rng, 3)
    res = oa.check_commutation(0.31 + 0.02j, -0.44 + 0.1j, p)
    assert res["BB"] <= 1e-10 and res["CC"] <= 1e-10
    assert res["AB"] <= 1e-10 and res["DB"] <= 1e-10
    assert oa.check_reflection_u(0.3, 0.55 - 0.1j, draw(rng, 2)) <= 1e-10


def test_vacuum_eigen_actions(rng):
    p = draw(rng, 3)
    lam = 0.27 + 0.04j
    u = oa.build_sklyanin(lam, p)
    up = oa.all_up(3)
    ev = w.vacuum_eigenvalues(lam, p)
    assert np.max(np.abs(u.A @ up - ev.beta * up)) <= 1e-10 * abs(ev.beta)
    assert np.max(np.abs(u.D_tilde @ up - ev.zeta * up)) <= 1e-10 * max(1, abs(ev.zeta))
    assert np.max(np.abs(u.C @ up)) <= 1e-12


@pytest.mark.parametrize("N,r", [(2, 1), (2, 2), (3, 2), (3, 0), (3, 3)])
def test_offshell_actions(rng, N, r):
    assert oa.check_offshell_actions(draw(rng, N, complex_part=True), r) <= 1e-9


def test_projectors():
    for site in (1, 2, 3):
        p, q = oa.site_projector(3, site, "p"), oa.site_projector(3, site, "q")
        assert np.allclose(p + q, np.eye(8))
        assert np.allclose(p @ p, p) and np.allclose(q @ q, q)
    with pytest.raises(IndexOutOfRange):
        oa.site_projector(3, 4, "p")


def test_z_symmetric_in_rows_and_columns(rng):
    p = draw(rng, 3)
    z = oa.z_oracle(p)
    for perm in permutations(range(3)):
        assert rel(oa.z_oracle(p.permuted(lam_order=perm)), z) <= 1e-10
        assert rel(oa.z_oracle(p.permuted(mu_order=perm)), z) <= 1e-10


def test_sum_rules(rng):
    for N in range(2, 6):
        p = draw(rng, N)
        assert oa.g_oracle(p, N) == pytest.approx(1, abs=1e-12)
        assert sum(oa.h_oracle(p, r) for r in range(1, N + 1)) == pytest.approx(1, abs=1e-12)
        for r in range(1, N + 1):
            assert oa.f_oracle(p, r, 1) == pytest.approx(oa.g_oracle(p, r), abs=1e-13)
            g_prev = oa.g_oracle(p, r - 1) if r > 1 else 0
            assert oa.h_oracle(p, r) == pytest.approx(oa.g_oracle(p, r) - g_prev, abs=1e-12)
        for s in range(1, N + 1):
            assert oa.f_oracle(p, N, s) == pytest.approx(1, abs=1e-12)


def test_efp_vanishes_beyond_r(rng):
    p = draw(rng, 4)
    for r in range(1, 4):
        for s in range(r + 1, 5):
            assert abs(oa.f_oracle(p, r, s)) <= 1e-14


def test_caps_and_guards():
    with pytest.raises(MemoryBudget):
        oa.z_oracle(ModelParameters.homogeneous(0.6, 0.15, 3), cap=2)
    with pytest.raises(IndexOutOfRange):
        oa.g_oracle(ModelParameters.homogeneous(0.6, 0.15, 3), 4)
    # mu = xi kills kappa_-(mu) and with it Z
    with pytest.raises(DivisionByZeroPartition):
        oa.g_oracle(ModelParameters(0.4, 1.2, (0.6,), (1.2,)), 1)
