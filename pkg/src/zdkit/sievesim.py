"""Monte Carlo surrogate for the large-sieve orthogonality structure.

Haar-random determinant-one Satake ensembles stand in for the spectral
family: Schur orthonormality, diagonal dominance of random linear forms,
and the correlation structure of the inverse coefficients are estimated
by seeded, worker-splittable sampling.  The exact family-scaling
quantities V(q) and F(q) live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coeffs import factorize
from .errors import EmptySupport, SizeLimit
from .symfunc import (
    ExponentTuple,
    Partition,
    SatakeVector,
    schur_bialternant,
    schur_bialternant_batch,
)

DISTRIBUTIONS = ("haar_su_m", "all_ones", "adversarial_aligned")


@dataclass(frozen=True)
class EnsembleSpec:
    m: int
    count: int
    seed: int = 0
    distribution: str = "haar_su_m"

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if self.distribution not in DISTRIBUTIONS:
            raise ValueError(f"unknown distribution {self.distribution!r}")


def _haar_eigs(m, count, rng):
    """Eigenvalue tuples of Haar SU(m), batched QR of complex Ginibre."""
    z = (
        rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))
    ) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.einsum("...ii->...i", r)
    q = q * (d / np.abs(d))[:, None, :]
    ev = np.linalg.eigvals(q)
    ev = ev / np.prod(ev, axis=1)[:, None] ** (1.0 / m)
    return ev


def _sample_alphas(spec: EnsembleSpec, workers=1):
    """Sample matrix (count, m), deterministic per (seed, workers)."""
    if spec.distribution == "all_ones":
        return np.ones((spec.count, spec.m), dtype=complex)
    if spec.distribution == "adversarial_aligned":
        rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
        one = _haar_eigs(spec.m, 1, rng)
        return np.repeat(one, spec.count, axis=0)
    streams = np.random.SeedSequence(spec.seed).spawn(workers)
    per = [spec.count // workers] * workers
    per[-1] += spec.count - sum(per)
    blocks = [
        _haar_eigs(spec.m, n, np.random.default_rng(ss))
        for n, ss in zip(per, streams)
    ]
    return np.concatenate(blocks, axis=0)


def sample_haar_satake(spec: EnsembleSpec, workers=1):
    """The ensemble as SatakeVector objects (det-one, unitary)."""
    alphas = _sample_alphas(spec, workers)
    return [
        SatakeVector(tuple(row), unitary_flag=True, det_one_flag=True)
        for row in alphas
    ]


def _schur_batch(alphas, lam):
    """Batch bialternant with per-row confluent repair (all_ones rows)."""
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = schur_bialternant_batch(alphas, lam)
    bad = ~np.isfinite(vals)
    for i in np.nonzero(bad)[0]:
        vals[i] = schur_bialternant(SatakeVector(tuple(alphas[i])), lam)
    return vals


def _mc_mean(values, workers):
    """Mean and stderr with a fixed-shape pairwise (tree) reduction."""
    n = len(values)
    total = _tree_sum(values)
    mean = total / n
    var = _tree_sum(np.abs(values - mean) ** 2).real / max(n - 1, 1)
    return mean, math.sqrt(var / n)


def _tree_sum(values):
    acc = np.asarray(values)
    while len(acc) > 1:
        half = len(acc) // 2
        head = acc[: 2 * half].reshape(half, 2).sum(axis=1)
        acc = np.concatenate([head, acc[2 * half :]])
    return acc[0]


@dataclass
class MCReport:
    estimate: complex
    stderr: float
    samples: int
    seed: int

    def to_json(self):
        return {
            "estimate": [self.estimate.real, self.estimate.imag],
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def orthogonality_delta(lam: Partition, mu: Partition, m):
    """1 if the two partitions agree modulo the determinant-one shift."""
    return 1.0 if lam.shift_class(m) == mu.shift_class(m) else 0.0


def schur_orthogonality_mc(spec: EnsembleSpec, lam: Partition, mu: Partition, workers=1):
    """Monte Carlo E[s_lam(alpha) conj(s_mu(alpha))] over the ensemble."""
    if lam.weight > 8 or mu.weight > 8:
        raise SizeLimit("partitions limited to weight 8")
    alphas = _sample_alphas(spec, workers)
    vals = _schur_batch(alphas, lam) * np.conj(_schur_batch(alphas, mu))
    est, err = _mc_mean(vals, workers)
    return MCReport(estimate=complex(est), stderr=err, samples=spec.count, seed=spec.seed)


def partitions_up_to(max_weight, max_len):
    """All nonempty partitions with weight <= max_weight and <= max_len rows."""
    out = []

    def rec(rem, mx, cur):
        if cur:
            out.append(Partition(tuple(cur)))
        if rem == 0 or len(cur) == max_len:
            return
        for p in range(min(rem, mx), 0, -1):
            rec(rem - p, p, cur + [p])

    rec(max_weight, max_weight, [])
    return sorted(set(out), key=lambda q: (q.weight, q.parts))


@dataclass
class GramReport:
    worst_sigma: float
    worst_pair: tuple
    pairs: int
    samples: int
    seed: int

    def to_json(self):
        return {
            "worst_sigma": self.worst_sigma,
            "worst_pair": [list(self.worst_pair[0]), list(self.worst_pair[1])],
            "pairs": self.pairs,
            "samples": self.samples,
            "seed": self.seed,
        }


def gram_identity_check(spec: EnsembleSpec, max_weight=4, workers=1):
    """Worst sigma-deviation of the Schur Gram matrix from the shift delta.

    One shared sample batch evaluates every partition once; each Gram
    entry is compared to its expected 0/1 value in stderr units.
    """
    if max_weight > 8:
        raise SizeLimit("partitions limited to weight 8")
    parts = partitions_up_to(max_weight, spec.m)
    alphas = _sample_alphas(spec, workers)
    cols = {lam: _schur_batch(alphas, lam) for lam in parts}
    worst, worst_pair, npairs = 0.0, (parts[0], parts[0]), 0
    for i, lam in enumerate(parts):
        for mu in parts[i:]:
            est, err = _mc_mean(cols[lam] * np.conj(cols[mu]), workers)
            dev = float(abs(est - orthogonality_delta(lam, mu, spec.m)) / max(err, 1e-15))
            npairs += 1
            if dev > worst:
                worst, worst_pair = dev, (lam.parts, mu.parts)
    return GramReport(
        worst_sigma=worst,
        worst_pair=worst_pair,
        pairs=npairs,
        samples=spec.count,
        seed=spec.seed,
    )


@dataclass
class LinearForm:
    """Finite form on exponent tuples with the polynomial weight cutoff."""

    beta: dict  # ExponentTuple -> complex
    cutoff: float
    coprimality_vacuous: bool = True

    def __post_init__(self):
        for t, _ in self.beta.items():
            if tuple_weight(t) > self.cutoff:
                raise ValueError(f"tuple {t.a} has weight beyond the cutoff")

    def support(self):
        return list(self.beta)


def tuple_weight(t: ExponentTuple):
    """w(n) = n_1 n_2^2 ... n_{m-1}^{m-1} at the nominal prime 2."""
    # a = (a_{m-1}, ..., a_1); entry a_j carries weight 2^{j a_j}
    out = 1
    for j, a in zip(range(t.m - 1, 0, -1), t.a):
        out *= (2**j) ** a
    return out


@dataclass
class RatioReport:
    ratio: float
    stderr: float
    samples: int
    seed: int
    support_size: int


def large_sieve_ratio(spec: EnsembleSpec, form: LinearForm, workers=1):
    """mean |sum beta(n) B(n)|^2 over the ensemble, against sum |beta|^2."""
    support = form.support()
    if not support:
        raise EmptySupport("form has no support tuples")
    alphas = _sample_alphas(spec, workers)
    acc = np.zeros(spec.count, dtype=complex)
    for t in support:
        acc += form.beta[t] * _schur_batch(alphas, t.partition())
    vals = np.abs(acc) ** 2
    denom = sum(abs(b) ** 2 for b in form.beta.values())
    est, err = _mc_mean(vals.astype(complex), workers)
    return RatioReport(
        ratio=float(est.real / denom),
        stderr=err / denom,
        samples=spec.count,
        seed=spec.seed,
        support_size=len(support),
    )


# ------------------------------------------------ inverse-coefficient MC


def _mu_local_powers(alphas_at_p, kmax):
    """mu(p^k) rows for a batch of Satake vectors at one prime."""
    count, m = alphas_at_p.shape
    out = np.zeros((count, kmax + 1), dtype=complex)
    out[:, 0] = 1.0
    for j in range(1, min(m, kmax) + 1):
        col = Partition((1,) * j)
        out[:, j] = ((-1.0) ** j) * _schur_batch(alphas_at_p, col)
    return out


def mu_values_ensemble(spec: EnsembleSpec, x, workers=1):
    """Matrix of mu_pi(n) for n <= x, one row per ensemble sample.

    Each sample draws an independent Satake vector at every prime <= x,
    so mu is the multiplicative extension of independent local data.
    """
    from .coeffs import primes_up_to

    x = int(x)
    if x > 10**4:
        raise SizeLimit("x limited to 1e4")
    values = np.zeros((spec.count, x + 1), dtype=complex)
    values[:, 1] = 1.0
    streams = np.random.SeedSequence(spec.seed).spawn(len(primes_up_to(x)) or 1)
    for i, p in enumerate(primes_up_to(x)):
        if spec.distribution == "all_ones":
            alphas = np.ones((spec.count, spec.m), dtype=complex)
        else:
            rng = np.random.default_rng(streams[i])
            alphas = _haar_eigs(spec.m, spec.count, rng)
        kmax = int(math.log(x) / math.log(p))
        local = _mu_local_powers(alphas, kmax)
        pk, k = p, 1
        while pk <= x:
            rest = np.arange(1, x // pk + 1)
            rest = rest[rest % p != 0]
            values[:, pk * rest] = local[:, k : k + 1] * values[:, rest]
            pk *= p
            k += 1
    return values


@dataclass
class CorrelationReport:
    pairs: dict  # (a, b) -> MCReport
    samples: int
    seed: int


def mu_power_correlation(spec: EnsembleSpec, x, pairs=None, workers=1):
    """E[mu(a) conj(mu(b))] for pairs a, b <= x over the ensemble."""
    values = mu_values_ensemble(spec, x, workers)
    if pairs is None:
        ns = range(1, int(x) + 1)
        pairs = [(a, b) for a in ns for b in ns if a <= b]
    out = {}
    for a, b in pairs:
        est, err = _mc_mean(values[:, a] * np.conj(values[:, b]), workers)
        out[(a, b)] = MCReport(
            estimate=complex(est), stderr=err, samples=spec.count, seed=spec.seed
        )
    return CorrelationReport(pairs=out, samples=spec.count, seed=spec.seed)


def mpower_free_part(n, m):
    """The m-power-free part of n (divide out all p^{m k} factors)."""
    out = 1
    for p, k in factorize(n):
        out *= p ** (k % m)
    return out


# ------------------------------------------------------- family scalers


def index_V(m, q):
    """q^{m-1} prod_{p|q} (1 + 1/p + ... + 1/p^{m-1}), exact integer."""
    if q < 1:
        raise ValueError("q must be >= 1")
    out = Fraction(q) ** (m - 1)
    for p, _ in factorize(q):
        out *= sum(Fraction(1, p**j) for j in range(m))
    if out.denominator != 1:
        raise ArithmeticError(f"V({m},{q}) not integral: {out}")
    return int(out)


@dataclass
class FamilyFactorReport:
    value: float
    omega: int
    two_omega: float
    two_m_omega: float
    ratio_vs_two_omega: float


def family_factor_F(m, q, theta):
    """prod_{p|q} (1 + p^{-(1/2-theta)})^m with its comparator bounds."""
    if not 0 <= theta < 0.5:
        raise ValueError("theta must lie in [0, 1/2)")
    value = 1.0
    omega = 0
    for p, _ in factorize(q):
        value *= (1 + p ** (-(0.5 - theta))) ** m
        omega += 1
    report = FamilyFactorReport(
        value=value,
        omega=omega,
        two_omega=2.0**omega,
        two_m_omega=2.0 ** (m * omega),
        ratio_vs_two_omega=value / 2.0**omega if omega else value,
    )
    if value > report.two_m_omega * (1 + 1e-12):
        raise ArithmeticError("F(q) exceeded its 2^{m omega(q)} envelope")
    return report
