import math

import numpy as np
import pytest

from zdkit.coeffs import (
    CoefficientTable,
    LocalFactor,
    bound_check,
    build_table,
    dirichlet_convolution,
    factorize,
    local_inverse_coefficients,
    mpower_free_expansion,
    primes_up_to,
    reconstruct_mu,
    smallest_prime_factors,
    tau_m,
)
from zdkit.errors import CutoffMismatch, MissingLocalFactor
from zdkit.lfunc import LFunctionModel, haar_satake, unitary_model
from zdkit.symfunc import Partition, SatakeVector, schur_bialternant


def all_ones_model(m):
    return LFunctionModel(
        m=m,
        kappas=(0.0,) * m,
        local_rule=lambda p: LocalFactor(p, sv=SatakeVector((1.0,) * m, prime=p)),
    )


class TestSieveHelpers:
    def test_primes(self):
        assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_factorize(self):
        assert factorize(360) == [(2, 3), (3, 2), (5, 1)]

    def test_tau_m_binomial(self):
        spf = smallest_prime_factors(100)
        assert tau_m(3, 8, spf) == math.comb(3 + 3 - 1, 2)
        assert tau_m(2, 12, spf) == 6  # number of divisors


class TestLocalFactor:
    def test_inverse_coefficients_literal(self):
        # 1/L_p(s) = (1 - a p^-s)(1 - b p^-s): c = (1, -(a+b), ab)
        sv = SatakeVector((0.5, 0.25))
        c = local_inverse_coefficients(sv)
        assert c[0] == pytest.approx(1.0)
        assert c[1] == pytest.approx(-0.75)
        assert c[2] == pytest.approx(0.125)

    def test_lambda_times_mu_is_local_delta(self, rng):
        sv = haar_satake(3, rng)
        lf = LocalFactor(5, sv=sv)
        lam = lf.lambda_powers(8)
        mu = lf.inverse_powers(8)
        conv = np.convolve(lam, mu)[:9]
        assert abs(conv[0] - 1) < 1e-12
        assert np.max(np.abs(conv[1:])) < 1e-10

    def test_power_sums_newton_vs_direct(self, rng):
        sv = haar_satake(4, rng)
        direct = LocalFactor(3, sv=sv).power_sums(6)
        # ramified branch runs the Newton recursion on the same lambda data
        lam = LocalFactor(3, sv=sv).lambda_powers(6)
        newton = LocalFactor(3, ramified_coeffs=tuple(lam)).power_sums(6)
        assert np.max(np.abs(direct[1:] - newton[1:])) < 1e-10

    def test_exactly_one_data_source(self):
        with pytest.raises(ValueError):
            LocalFactor(2)
        with pytest.raises(ValueError):
            LocalFactor(2, sv=SatakeVector((1.0,)), ramified_coeffs=(1.0,))


class TestTables:
    def test_lambda_multiplicative(self):
        model = unitary_model(3, seed=7)
        t = build_table(model, "lambda", 100)
        assert t[6] == pytest.approx(t[2] * t[3])
        assert t[35] == pytest.approx(t[5] * t[7])

    def test_lambda_prime_power_is_schur(self):
        model = unitary_model(2, seed=3)
        t = build_table(model, "lambda", 32)
        sv = model.local_factor(2).sv
        assert t[8] == pytest.approx(schur_bialternant(sv, Partition((3,))))

    def test_all_ones_lambda_is_tau_m(self):
        model = all_ones_model(3)
        t = build_table(model, "lambda", 200)
        spf = smallest_prime_factors(200)
        for n in range(1, 201):
            assert t[n] == pytest.approx(tau_m(3, n, spf))

    def test_vonmangoldt_support(self):
        model = unitary_model(2, seed=1)
        t = build_table(model, "vonmangoldt", 50)
        assert t[1] == 0 and t[6] == 0 and t[12] == 0
        sv = model.local_factor(3).sv
        expect = (sv.alphas[0] ** 2 + sv.alphas[1] ** 2) * math.log(3)
        assert t[9] == pytest.approx(expect)

    def test_inversion_delta(self):
        model = unitary_model(3, seed=11)
        lam = build_table(model, "lambda", 2000)
        mu = build_table(model, "mu", 2000)
        conv = dirichlet_convolution(lam, mu)
        assert conv[1] == pytest.approx(1.0)
        assert np.max(np.abs(conv.values[2:])) < 1e-10

    def test_cutoff_mismatch(self):
        model = unitary_model(2, seed=0)
        a = build_table(model, "lambda", 100)
        b = build_table(model, "mu", 50)
        with pytest.raises(CutoffMismatch):
            dirichlet_convolution(a, b)

    def test_missing_local_factor(self):
        model = LFunctionModel(m=2, kappas=(0.0, 0.0))
        with pytest.raises(MissingLocalFactor):
            build_table(model, "lambda", 10)

    def test_csv_round_trip(self, tmp_path):
        model = unitary_model(2, seed=9)
        t = build_table(model, "lambda", 64)
        path = tmp_path / "table.csv"
        t.to_csv(path)
        back = CoefficientTable.from_csv(path, "lambda", 2)
        assert np.max(np.abs(back.values - t.values)) < 1e-12


class TestBounds:
    @pytest.mark.parametrize("kind", ["lambda", "mu", "vonmangoldt"])
    def test_unitary_envelope(self, kind):
        model = unitary_model(3, seed=21)
        rep = bound_check(build_table(model, kind, 3000), 0.0)
        assert rep.worst_ratio <= 1 + 1e-10

    def test_theta_out_of_range(self):
        model = unitary_model(2, seed=0)
        with pytest.raises(ValueError):
            bound_check(build_table(model, "lambda", 10), 0.7)


class TestMPowerFreeExpansion:
    @pytest.mark.parametrize("m", [2, 3])
    def test_reconstructs_mu(self, m):
        model = unitary_model(m, seed=4)
        rows = mpower_free_expansion(model, 200)
        rec = reconstruct_mu(rows, 200)
        mu = build_table(model, "mu", 200)
        assert np.max(np.abs(rec[1:] - mu.values[1:])) < 1e-10

    def test_row_structure(self):
        model = unitary_model(2, seed=4)
        rows = [r for r in mpower_free_expansion(model, 50) if r.n in (12, 6)]
        # 12 = n_1 n_2^2 with both squarefree and coprime: only (3, 2);
        # 6 is squarefree so only (6, 1)
        assert sorted(r.factors for r in rows) == [(3, 2), (6, 1)]
        for r in rows:
            n1, n2 = r.factors
            assert n1 * n2**2 == r.n
            assert math.gcd(n1, n2) == 1
            assert r.fourier_tuple == (n1,)
