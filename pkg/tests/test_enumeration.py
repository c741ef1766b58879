import pytest

from conftest import draw, rel
from reflect6v import oracle_algebraic as oa
from reflect6v import oracle_enumeration as oe
from reflect6v.errors import IndexOutOfRange, SizeCap
from reflect6v.weights import ModelParameters


def test_configuration_counts():
    # admissible lattices: 2, 12, 208 (U-turn alternating sign matrices)
    assert [oe.count_configurations(N) for N in (1, 2, 3)] == [2, 12, 208]


def test_n1_matches_oracle():
    p = ModelParameters(0.4, 1.2, (0.6,), (0.15,))
    assert abs(oe.enumerate_partition(p) - oa.z_oracle(p)) <= 1e-12


@pytest.mark.parametrize("N", [1, 2, 3])
def test_agreement_with_operator_oracle(rng, N):
    for _ in range(25):
        p = draw(rng, N)
        assert rel(oe.enumerate_partition(p), oa.z_oracle(p)) <= 1e-10
        for r in range(1, N + 1):
            assert rel(oe.enumerate_g(p, r), oa.g_oracle(p, r)) <= 1e-10
            assert rel(oe.enumerate_h(p, r), oa.h_oracle(p, r)) <= 1e-10
            for s in range(1, N + 1):
                f = oa.f_oracle(p, r, s)
                assert abs(oe.enumerate_efp(p, r, s) - f) <= 1e-10 * max(abs(f), 1e-30) or (s > r and abs(f) < 1e-14)


def test_efp_identities(rng):
    p = draw(rng, 3)
    for r in range(1, 4):
        assert oe.enumerate_efp(p, r, 1) == pytest.approx(oe.enumerate_g(p, r))
    assert all(oe.enumerate_efp(p, 3, s) == pytest.approx(1) for s in (1, 2, 3))
    p2 = draw(rng, 2)
    assert oe.enumerate_efp(p2, 1, 2) == pytest.approx(oa.f_oracle(p2, 1, 2), abs=1e-14)


def test_size_cap():
    with pytest.raises(SizeCap):
        oe.enumerate_partition(ModelParameters.homogeneous(0.6, 0.15, 4))
    with pytest.raises(IndexOutOfRange):
        oe.enumerate_efp(ModelParameters.homogeneous(0.6, 0.15, 2), 1, 3)
