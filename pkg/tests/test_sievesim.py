import math

import numpy as np
import pytest

from zdkit.errors import EmptySupport, SizeLimit
from zdkit.sievesim import (
    EnsembleSpec,
    LinearForm,
    _sample_alphas,
    _schur_batch,
    family_factor_F,
    gram_identity_check,
    index_V,
    large_sieve_ratio,
    mpower_free_part,
    mu_power_correlation,
    mu_values_ensemble,
    orthogonality_delta,
    partitions_up_to,
    sample_haar_satake,
    schur_orthogonality_mc,
    tuple_weight,
)
from zdkit.symfunc import ExponentTuple, Partition


class TestSampling:
    def test_unitary_and_det_one(self):
        a = _sample_alphas(EnsembleSpec(m=3, count=500, seed=42))
        assert np.max(np.abs(np.abs(a) - 1)) < 1e-12
        assert np.max(np.abs(np.prod(a, axis=1) - 1)) < 1e-12

    def test_bit_identical_repetition(self):
        spec = EnsembleSpec(m=3, count=200, seed=42)
        assert np.array_equal(_sample_alphas(spec), _sample_alphas(spec))

    def test_worker_split_deterministic(self):
        spec = EnsembleSpec(m=3, count=999, seed=9)
        a = _sample_alphas(spec, workers=4)
        b = _sample_alphas(spec, workers=4)
        assert a.shape == (999, 3)
        assert np.array_equal(a, b)

    def test_m_one_trivial(self):
        a = _sample_alphas(EnsembleSpec(m=1, count=30, seed=7))
        assert np.max(np.abs(a - 1)) < 1e-12

    def test_satake_wrappers_flagged(self):
        svs = sample_haar_satake(EnsembleSpec(m=2, count=5, seed=0))
        assert all(sv.det_one_flag and sv.unitary_flag for sv in svs)

    def test_invalid_spec(self):
        with pytest.raises(ValueError):
            EnsembleSpec(m=2, count=0)
        with pytest.raises(ValueError):
            EnsembleSpec(m=2, count=1, distribution="bogus")


class TestOrthogonality:
    def test_diagonal_is_one(self):
        spec = EnsembleSpec(m=3, count=100_000, seed=1)
        r = schur_orthogonality_mc(spec, Partition((1,)), Partition((1,)))
        assert abs(r.estimate - 1) < 3 * r.stderr

    def test_shift_equivalent_pair(self):
        spec = EnsembleSpec(m=3, count=100_000, seed=1)
        r = schur_orthogonality_mc(spec, Partition((2, 1, 1)), Partition((1,)))
        assert abs(r.estimate - 1) < 3 * r.stderr

    def test_distinct_irreducibles_vanish(self):
        spec = EnsembleSpec(m=3, count=100_000, seed=1)
        r = schur_orthogonality_mc(spec, Partition((2,)), Partition((1, 1)))
        assert abs(r.estimate) < 3 * r.stderr

    def test_size_limit(self):
        spec = EnsembleSpec(m=3, count=10, seed=0)
        with pytest.raises(SizeLimit):
            schur_orthogonality_mc(spec, Partition((9,)), Partition((1,)))

    def test_delta_respects_shift_classes(self):
        assert orthogonality_delta(Partition((2, 1, 1)), Partition((1,)), 3) == 1.0
        assert orthogonality_delta(Partition((2,)), Partition((1, 1)), 3) == 0.0

    def test_gram_identity(self):
        rep = gram_identity_check(EnsembleSpec(m=3, count=50_000, seed=2))
        assert rep.worst_sigma <= 3.0
        assert rep.pairs == 55

    def test_report_json_shape(self):
        spec = EnsembleSpec(m=2, count=1000, seed=3)
        doc = schur_orthogonality_mc(spec, Partition((1,)), Partition((1,))).to_json()
        assert set(doc) == {"estimate", "stderr", "samples", "seed"}


class TestLargeSieve:
    def tuples(self, count=20):
        out = []
        for a2 in range(5):
            for a1 in range(6):
                if (a2, a1) != (0, 0):
                    out.append(ExponentTuple((a2, a1)))
        return out[:count]

    def test_random_sign_ratio_near_one(self):
        rng = np.random.default_rng(0)
        beta = {t: complex(rng.choice([-1.0, 1.0])) for t in self.tuples()}
        form = LinearForm(beta=beta, cutoff=10**9)
        rep = large_sieve_ratio(EnsembleSpec(m=3, count=50_000, seed=3), form)
        assert rep.ratio <= 1 + 5 * rep.stderr

    def test_single_tuple_support(self):
        form = LinearForm(beta={ExponentTuple((0, 1)): 1.0}, cutoff=10)
        rep = large_sieve_ratio(EnsembleSpec(m=3, count=50_000, seed=4), form)
        assert abs(rep.ratio - 1) <= 3 * rep.stderr

    def test_adversarial_reaches_support_scale(self):
        spec = EnsembleSpec(m=3, count=16, seed=11, distribution="adversarial_aligned")
        alpha0 = _sample_alphas(spec)[0:1]
        beta = {}
        for t in self.tuples(10):
            beta[t] = complex(np.conj(_schur_batch(alpha0, t.partition())[0]))
        rep = large_sieve_ratio(spec, LinearForm(beta=beta, cutoff=10**9))
        closed = sum(abs(b) ** 2 for b in beta.values())
        assert rep.ratio == pytest.approx(closed, rel=1e-9)
        assert rep.ratio > 2.0  # far beyond the diagonal value 1

    def test_all_ones_closed_form(self):
        # both reps are 3-dimensional at m = 3, so the form sums dimensions
        beta = {ExponentTuple((0, 1)): 1.0, ExponentTuple((1, 0)): 1.0}
        rep = large_sieve_ratio(
            EnsembleSpec(m=3, count=4, seed=0, distribution="all_ones"),
            LinearForm(beta=beta, cutoff=100),
        )
        assert rep.ratio == pytest.approx(abs(3 + 3) ** 2 / 2, rel=1e-9)

    def test_empty_support(self):
        with pytest.raises(EmptySupport):
            large_sieve_ratio(
                EnsembleSpec(m=2, count=2, seed=0), LinearForm(beta={}, cutoff=5)
            )

    def test_weight_rule_and_cutoff(self):
        # a = (a_2, a_1) at the nominal prime: w = 2^(2 a_2) * 2^(a_1)
        assert tuple_weight(ExponentTuple((1, 2))) == 2**2 * 2**2
        with pytest.raises(ValueError):
            LinearForm(beta={ExponentTuple((3, 0)): 1.0}, cutoff=10)


class TestMuCorrelation:
    def test_shared_power_free_part_correlates(self):
        spec = EnsembleSpec(m=2, count=20_000, seed=5)
        corr = mu_power_correlation(spec, 50, pairs=[(3, 12), (2, 3), (1, 4)])
        shared = corr.pairs[(3, 12)]  # both have 2-power-free part 3
        assert abs(shared.estimate) > 3 * shared.stderr
        generic = corr.pairs[(2, 3)]
        assert abs(generic.estimate) <= 3 * generic.stderr
        # mu(4) = e_2(alpha) = det = 1 for the det-one GL(2) factor
        unit = corr.pairs[(1, 4)]
        assert abs(unit.estimate - 1) < 1e-10

    def test_diagonal_positive(self):
        spec = EnsembleSpec(m=2, count=5000, seed=6)
        corr = mu_power_correlation(spec, 10, pairs=[(6, 6)])
        assert corr.pairs[(6, 6)].estimate.real > 0

    def test_values_multiplicative_and_truncated(self):
        spec = EnsembleSpec(m=2, count=100, seed=8)
        vals = mu_values_ensemble(spec, 50)
        assert np.all(vals[:, 1] == 1)
        assert np.max(np.abs(vals[:, 6] - vals[:, 2] * vals[:, 3])) < 1e-12
        assert np.all(vals[:, 8] == 0)  # mu(p^3) = 0 in degree 2

    def test_cutoff_limit(self):
        with pytest.raises(SizeLimit):
            mu_values_ensemble(EnsembleSpec(m=2, count=2, seed=0), 20_000)

    def test_mpower_free_part(self):
        assert mpower_free_part(12, 2) == 3
        assert mpower_free_part(72, 3) == 9
        assert mpower_free_part(7, 2) == 7


class TestFamilyScalers:
    def test_index_values(self):
        assert index_V(2, 7) == 8
        assert index_V(3, 2) == 7
        assert index_V(1, 10) == 1

    def test_index_multiplicative(self):
        assert index_V(3, 12) == index_V(3, 4) * index_V(3, 3)
        assert index_V(2, 35) == index_V(2, 5) * index_V(2, 7)

    def test_family_factor_prime_and_empty(self):
        rep = family_factor_F(2, 7, 0.0)
        assert rep.value == pytest.approx((1 + 7**-0.5) ** 2)
        assert family_factor_F(5, 1, 0.3).value == 1.0

    def test_family_factor_log_sum_cross_check(self):
        theta = 7 / 50
        rep = family_factor_F(2, 210, theta)
        logsum = sum(
            2 * math.log1p(p ** -(0.5 - theta)) for p in (2, 3, 5, 7)
        )
        assert math.log(rep.value) == pytest.approx(logsum, abs=1e-12)

    def test_family_factor_multiplicative(self):
        a = family_factor_F(2, 6, 0.2).value
        b = family_factor_F(2, 2, 0.2).value * family_factor_F(2, 3, 0.2).value
        assert a == pytest.approx(b)

    def test_comparator_envelope(self):
        rep = family_factor_F(3, 30, 0.1)
        assert rep.value <= rep.two_m_omega
        assert rep.two_omega == 8.0

    def test_theta_validated(self):
        with pytest.raises(ValueError):
            family_factor_F(2, 7, 0.5)


class TestPartitionEnumeration:
    def test_weight_four_three_rows(self):
        parts = partitions_up_to(4, 3)
        assert Partition((4,)) in parts
        assert Partition((2, 1, 1)) in parts
        assert Partition((1, 1, 1, 1)) not in parts
        assert len(parts) == 10
