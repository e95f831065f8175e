import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zdkit.errors import ConfluentParameters, SizeLimit
from zdkit.lfunc import haar_satake
from zdkit.symfunc import (
    ExponentTuple,
    Partition,
    SatakeVector,
    fourier_coefficient,
    hook_identity_residual,
    power_sum,
    schur_bialternant,
    schur_bialternant_batch,
    schur_tableau_oracle,
    shift_invariance_residual,
)


def unit_vector(m, seed):
    return haar_satake(m, np.random.default_rng(seed))


class TestPartition:
    def test_trailing_zeros_stripped(self):
        assert Partition((3, 1, 0, 0)).parts == (3, 1)

    def test_not_decreasing_rejected(self):
        with pytest.raises(ValueError):
            Partition((1, 2))

    def test_shift_class(self):
        assert Partition((2, 1, 1)).shift_class(3) == Partition((1,)).shift_class(3)
        assert Partition((2,)).shift_class(3) != Partition((1, 1)).shift_class(3)


class TestExponentTuple:
    def test_partition_map(self):
        # a = (a_2, a_1) = (1, 2): rows are (a_1 + a_2, a_2) = (3, 1)
        assert ExponentTuple((1, 2)).partition() == Partition((3, 1))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ExponentTuple((-1, 0))


class TestSchurSmallClosedForms:
    """Hand-checkable polynomial identities, independent of both routes."""

    def test_single_row_is_complete_homogeneous(self):
        sv = SatakeVector((2.0, 3.0))
        # h_2(x, y) = x^2 + xy + y^2 = 19
        assert schur_bialternant(sv, Partition((2,))) == pytest.approx(19.0)
        assert schur_tableau_oracle(sv, Partition((2,))) == pytest.approx(19.0)

    def test_single_column_is_elementary(self):
        sv = SatakeVector((2.0, 3.0, 5.0))
        # e_2 = xy + xz + yz = 31
        assert schur_bialternant(sv, Partition((1, 1))) == pytest.approx(31.0)

    def test_full_column_is_determinant(self):
        sv = SatakeVector((2.0, 3.0, 5.0))
        assert schur_bialternant(sv, Partition((1, 1, 1))) == pytest.approx(30.0)

    def test_two_one_hook(self):
        sv = SatakeVector((2.0, 3.0))
        # s_(2,1)(x, y) = xy(x + y) = 30
        assert schur_bialternant(sv, Partition((2, 1))) == pytest.approx(30.0)
        assert schur_tableau_oracle(sv, Partition((2, 1))) == pytest.approx(30.0)

    @pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
    def test_su2_chebyshev_oracle(self, k):
        # for alpha = (e^{i t}, e^{-i t}), s_(k) = sin((k+1)t)/sin(t)
        t = 0.7
        sv = SatakeVector(
            (complex(math.cos(t), math.sin(t)), complex(math.cos(t), -math.sin(t))),
            unitary_flag=True,
            det_one_flag=True,
        )
        expect = math.sin((k + 1) * t) / math.sin(t)
        assert schur_bialternant(sv, Partition((k,))) == pytest.approx(expect)


class TestDualRoute:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_bialternant_matches_tableau(self, m):
        rng = np.random.default_rng(99 + m)
        lams = [
            Partition(p)
            for p in [(1,), (2,), (1, 1), (3, 1), (2, 2), (4, 2, 1), (3, 3, 2)]
            if len(p) <= m
        ]
        for _ in range(25):
            sv = haar_satake(m, rng)
            for lam in lams:
                a = schur_bialternant(sv, lam)
                b = schur_tableau_oracle(sv, lam)
                assert abs(a - b) <= 1e-10 * max(abs(b), 1.0)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(5)
        alphas = np.exp(2j * np.pi * rng.random((20, 3)))
        lam = Partition((3, 1))
        batch = schur_bialternant_batch(alphas, lam)
        for row, val in zip(alphas, batch):
            assert abs(schur_bialternant(SatakeVector(tuple(row)), lam) - val) < 1e-9

    def test_confluent_fallback_agrees_with_tableau(self):
        # nearly-equal parameters break the Vandermonde ratio; the fallback
        # and the tableau sum must still agree
        sv = SatakeVector((1.0, 1.0 + 1e-9, 1.0 - 1e-9))
        lam = Partition((2, 1))
        a = schur_bialternant(sv, lam)
        b = schur_tableau_oracle(sv, lam)
        assert abs(a - b) < 1e-6

    def test_exactly_confluent_without_fallback_raises(self):
        sv = SatakeVector((1.0, 1.0))
        with pytest.raises(ConfluentParameters):
            schur_bialternant(sv, Partition((2,)), allow_fallback=False)

    def test_tableau_size_limit(self):
        sv = SatakeVector(tuple(np.exp(2j * np.pi * np.arange(6) / 7)))
        with pytest.raises(SizeLimit):
            schur_tableau_oracle(sv, Partition((13,)))


class TestIdentities:
    @settings(max_examples=40, deadline=None)
    @given(
        m=st.integers(2, 5),
        k=st.integers(1, 10),
        seed=st.integers(0, 10**6),
    )
    def test_hook_identity_property(self, m, k, seed):
        sv = haar_satake(m, np.random.default_rng(seed))
        assert hook_identity_residual(sv, k) <= 1e-10

    @settings(max_examples=30, deadline=None)
    @given(
        m=st.integers(2, 4),
        j=st.integers(1, 3),
        seed=st.integers(0, 10**6),
    )
    def test_shift_invariance_property(self, m, j, seed):
        sv = haar_satake(m, np.random.default_rng(seed))
        lam = Partition((2, 1)[:m] if m >= 2 else (2,))
        assert shift_invariance_residual(sv, lam, j) <= 1e-10

    def test_power_sum_direct(self):
        sv = SatakeVector((2.0, -1.0, 0.5))
        assert power_sum(sv, 3) == pytest.approx(2**3 + (-1) ** 3 + 0.5**3)

    def test_fourier_coefficient_matches_schur(self):
        sv = unit_vector(3, 17)
        t = ExponentTuple((1, 2))
        direct = schur_bialternant(sv, t.partition())
        assert abs(fourier_coefficient(sv, t) - direct) < 1e-10


class TestSatakeVector:
    def test_det_one_flag_enforced(self):
        with pytest.raises(ValueError):
            SatakeVector((2.0, 1.0), det_one_flag=True)

    def test_ramanujan_bound_default_theta(self):
        sv = SatakeVector((1.0, 1.0), prime=3)
        assert sv.check_ramanujan_bound() <= 1.0
        with pytest.raises(ValueError):
            SatakeVector((5.0, 0.2), prime=2).check_ramanujan_bound()
