"""Schur polynomials in Satake parameters.

Two independent evaluation routes are provided: the bialternant
determinant ratio and semistandard-tableau enumeration.  The tableau
route doubles as the fallback when parameters are (nearly) confluent and
the determinant ratio degenerates.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConfluentParameters, SizeLimit

CONFLUENT_THRESHOLD = 1e-6
TABLEAU_MAX_WEIGHT = 12
TABLEAU_MAX_DIM = 5


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing nonnegative integers; trailing zeros stripped."""

    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError(f"parts not weakly decreasing: {parts}")
        if parts and parts[-1] < 0:
            raise ValueError(f"negative part in {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self):
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def padded(self, m):
        if len(self.parts) > m:
            raise ValueError(f"partition {self.parts} has more than {m} parts")
        return self.parts + (0,) * (m - len(self.parts))

    def shifted(self, j, m):
        """Add j to every one of the m rows (the determinant-one shift)."""
        return Partition(tuple(p + j for p in self.padded(m)))

    def shift_class(self, m):
        """Canonical representative of the mod-(j,...,j) equivalence class."""
        padded = self.padded(m)
        return Partition(tuple(p - padded[-1] for p in padded))


@dataclass(frozen=True)
class ExponentTuple:
    """Fourier-coefficient index (a_{m-1}, ..., a_1)."""

    a: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        if any(x < 0 for x in a):
            raise ValueError(f"negative exponent in {a}")
        object.__setattr__(self, "a", a)

    @property
    def m(self):
        return len(self.a) + 1

    def partition(self):
        # a = (a_{m-1}, ..., a_1); row t of the partition is a_{m-1}+...+a_t
        rev = self.a[::-1]  # (a_1, ..., a_{m-1})
        parts = tuple(sum(rev[t - 1 :]) for t in range(1, len(rev) + 1))
        return Partition(parts)

    def reversed(self):
        return ExponentTuple(self.a[::-1])


@dataclass(frozen=True)
class SatakeVector:
    """Local Satake parameters at one prime."""

    alphas: tuple
    prime: int = 2
    unitary_flag: bool = False
    det_one_flag: bool = False

    def __post_init__(self):
        alphas = tuple(complex(a) for a in self.alphas)
        if not alphas:
            raise ValueError("need at least one Satake parameter")
        object.__setattr__(self, "alphas", alphas)
        if self.det_one_flag:
            prod = np.prod(np.asarray(alphas))
            if abs(prod - 1.0) > 1e-12:
                raise ValueError(f"det-one flag set but product of alphas is {prod}")

    @property
    def m(self):
        return len(self.alphas)

    def min_separation(self):
        a = np.asarray(self.alphas)
        if len(a) == 1:
            return np.inf
        diff = np.abs(a[:, None] - a[None, :])
        return float(np.min(diff[~np.eye(len(a), dtype=bool)]))

    def check_ramanujan_bound(self, theta=None):
        """Assert |alpha_j| <= p^theta, default theta_m = 1/2 - 1/(m^2+1)."""
        if theta is None:
            theta = 0.5 - 1.0 / (self.m**2 + 1)
        bound = self.prime**theta
        worst = max(abs(a) for a in self.alphas)
        if worst > bound * (1 + 1e-12):
            raise ValueError(f"|alpha| = {worst} exceeds p^theta = {bound}")
        return worst / bound


@functools.lru_cache(maxsize=None)
def _ssyt_contents(parts, m):
    """Content multiset of all SSYT of the given shape with entries <= m.

    Returns (exponent_rows, counts): exponent_rows[i] is a content vector
    mu with multiplicity counts[i], so s_lam = sum_i counts[i] * alpha^mu.
    This is tableau enumeration with the content tallied once per shape.
    """
    if not parts:
        return ((0,) * m,), (1,)
    counts = {}
    nrows = len(parts)

    def fill(row_idx, rows):
        if row_idx == nrows:
            content = [0] * m
            for r in rows:
                for e in r:
                    content[e - 1] += 1
            key = tuple(content)
            counts[key] = counts.get(key, 0) + 1
            return
        width = parts[row_idx]
        above = rows[row_idx - 1] if row_idx > 0 else None
        row = [0] * width

        def place(col, lo):
            if col == width:
                fill(row_idx + 1, rows + [tuple(row)])
                return
            start = max(lo, (above[col] + 1) if above is not None else 1)
            for e in range(start, m + 1):
                row[col] = e
                place(col + 1, e)

        place(0, row_idx + 1)

    fill(0, [])
    keys = tuple(sorted(counts))
    return keys, tuple(counts[k] for k in keys)


def _as_gaussian_rational(z, max_den=4096):
    re = Fraction(z.real).limit_denominator(max_den)
    im = Fraction(z.imag).limit_denominator(max_den)
    if float(re) == z.real and float(im) == z.imag:
        return re, im
    return None


def schur_tableau_oracle(sv: SatakeVector, lam: Partition) -> complex:
    """Sum of alpha-monomials over semistandard tableaux of shape lam.

    Exact Gaussian-rational arithmetic when the parameters admit it,
    double precision otherwise.
    """
    m = sv.m
    if lam.weight > TABLEAU_MAX_WEIGHT or m > TABLEAU_MAX_DIM:
        raise SizeLimit(
            f"|lam| = {lam.weight}, m = {m} beyond tableau guard "
            f"({TABLEAU_MAX_WEIGHT}, {TABLEAU_MAX_DIM})"
        )
    if len(lam) > m:
        return 0.0 + 0.0j
    exps, counts = _ssyt_contents(lam.parts, m)
    rationals = [_as_gaussian_rational(a) for a in sv.alphas]
    if all(r is not None for r in rationals):
        total_re, total_im = Fraction(0), Fraction(0)
        for mu, c in zip(exps, counts):
            term_re, term_im = Fraction(1), Fraction(0)
            for (are, aim), e in zip(rationals, mu):
                for _ in range(e):
                    term_re, term_im = (
                        term_re * are - term_im * aim,
                        term_re * aim + term_im * are,
                    )
            total_re += c * term_re
            total_im += c * term_im
        return complex(float(total_re), float(total_im))
    E = np.asarray(exps)
    c = np.asarray(counts, dtype=float)
    a = np.asarray(sv.alphas)
    monos = np.prod(a[None, :] ** E, axis=1)
    return complex(monos @ c)


def schur_bialternant(sv: SatakeVector, lam: Partition, allow_fallback=True) -> complex:
    """Determinant-ratio evaluation of the Schur polynomial s_lam(alphas)."""
    m = sv.m
    if len(lam) > m:
        return 0.0 + 0.0j
    if sv.min_separation() < CONFLUENT_THRESHOLD:
        if not allow_fallback:
            raise ConfluentParameters(
                f"min separation {sv.min_separation():.3g} below "
                f"{CONFLUENT_THRESHOLD}"
            )
        return schur_tableau_oracle(sv, lam)
    a = np.asarray(sv.alphas)
    padded = lam.padded(m)
    exps_num = np.array([padded[k] + m - 1 - k for k in range(m)])
    exps_den = np.arange(m - 1, -1, -1)
    num = np.linalg.det(a[:, None] ** exps_num[None, :])
    den = np.linalg.det(a[:, None] ** exps_den[None, :])
    return complex(num / den)


def schur_bialternant_batch(alphas, lam: Partition):
    """Vectorized bialternant over a stack of parameter vectors (V, m)."""
    alphas = np.asarray(alphas)
    m = alphas.shape[1]
    if len(lam) > m:
        return np.zeros(alphas.shape[0], dtype=complex)
    padded = lam.padded(m)
    exps_num = np.array([padded[k] + m - 1 - k for k in range(m)])
    exps_den = np.arange(m - 1, -1, -1)
    num = np.linalg.det(alphas[:, :, None] ** exps_num[None, None, :])
    den = np.linalg.det(alphas[:, :, None] ** exps_den[None, None, :])
    return num / den


def fourier_coefficient(sv: SatakeVector, t: ExponentTuple) -> complex:
    """Normalized Fourier coefficient at the prime-power tuple indexed by t."""
    if not sv.det_one_flag:
        raise ValueError("Fourier coefficients require a det-one Satake vector")
    if t.m != sv.m:
        raise ValueError(f"tuple is for m = {t.m}, vector has m = {sv.m}")
    return schur_bialternant(sv, t.partition())


def power_sum(sv: SatakeVector, k: int) -> complex:
    """sum_j alpha_j^k, the prime-power coefficient of -L'/L."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return complex(np.sum(np.asarray(sv.alphas) ** k))


def _hook_partitions(m, k):
    """Partitions and signs of the hook expansion of the k-th power sum.

    First entry is the leading row partition (k); the rest carry signs
    -(-1)^j for j = 2..min(m, k), with the j = m tuple dropping the extra
    box entirely.
    """
    terms = [(Partition((k,)), 1.0)]
    for j in range(2, min(m, k) + 1):
        a = [0] * (m - 1)
        a[-1] = k - j  # a_1 entry
        if j < m:
            a[m - 1 - j] = 1  # a_j entry; absent for j = m
        lam = ExponentTuple(tuple(a)).partition()
        terms.append((lam, -((-1.0) ** j)))
    return terms


def hook_identity_residual(sv: SatakeVector, k: int) -> float:
    """|power sum - hook-shaped Schur combination| (Murnaghan-Nakayama)."""
    if not sv.det_one_flag:
        raise ValueError("hook identity requires a det-one Satake vector")
    if k < 1:
        raise ValueError("k must be >= 1")
    rhs = sum(sign * schur_bialternant(sv, lam) for lam, sign in _hook_partitions(sv.m, k))
    return abs(power_sum(sv, k) - rhs)


def shift_invariance_residual(sv: SatakeVector, lam: Partition, j: int) -> float:
    """|s_lam - s_{lam + (j,...,j)}| under the det-one constraint."""
    if not sv.det_one_flag:
        raise ValueError("shift invariance requires a det-one Satake vector")
    if j < 0:
        raise ValueError("shift must be nonnegative")
    base = schur_bialternant(sv, lam)
    shifted = schur_bialternant(sv, lam.shifted(j, sv.m))
    return abs(base - shifted)
