"""Dirichlet-coefficient tables from local Satake data.

Builds dense tables of lambda(n), mu(n), a(n)Lambda(n) and tau_m(n) up
to a cutoff, multiplicatively from local factors, together with the
bound checks and the m-power-free expansion of the inverse coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CutoffMismatch, MissingLocalFactor
from .symfunc import Partition, SatakeVector, schur_bialternant

TABLE_KINDS = ("lambda", "mu", "vonmangoldt", "tau_m")


def smallest_prime_factors(N):
    """spf[n] = smallest prime factor of n, for 0 <= n <= N."""
    spf = np.zeros(N + 1, dtype=np.int64)
    spf[1] = 1
    for p in range(2, N + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def primes_up_to(N):
    spf = smallest_prime_factors(N)
    return [p for p in range(2, N + 1) if spf[p] == p]


def factorize(n, spf=None):
    """List of (p, k) pairs of n."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    while n > 1:
        p = int(spf[n]) if spf is not None else _least_factor(n)
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        out.append((p, k))
    return out


def _least_factor(n):
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def tau_m(m, n, spf=None):
    """Number of ordered factorizations of n into m positive factors."""
    if m < 1 or n < 1:
        raise ValueError("need m >= 1 and n >= 1")
    out = 1
    for _, k in factorize(n, spf):
        out *= math.comb(k + m - 1, m - 1)
    return out


def local_inverse_coefficients(sv: SatakeVector):
    """Coefficients [c_0..c_m] of the inverted local Euler factor in p^{-s}.

    c_j = (-1)^j * s_{(1^j)}(alphas); c_0 = 1 and c_m = (-1)^m prod(alphas).
    """
    m = sv.m
    out = [1.0 + 0.0j]
    for j in range(1, m + 1):
        col = Partition((1,) * j)
        out.append(((-1.0) ** j) * schur_bialternant(sv, col))
    return out


@dataclass
class LocalFactor:
    """Local data at one prime: Satake parameters or explicit coefficients."""

    prime: int
    sv: SatakeVector | None = None
    ramified_coeffs: tuple | None = None

    def __post_init__(self):
        if (self.sv is None) == (self.ramified_coeffs is None):
            raise ValueError("supply exactly one of sv / ramified_coeffs")
        if self.ramified_coeffs is not None:
            coeffs = tuple(complex(c) for c in self.ramified_coeffs)
            if not coeffs or coeffs[0] != 1:
                coeffs = (1.0 + 0.0j,) + coeffs
            self.ramified_coeffs = coeffs

    @property
    def ramified(self):
        return self.sv is None

    def lambda_powers(self, kmax):
        """lambda(p^k) for k = 0..kmax."""
        if self.ramified:
            c = np.zeros(kmax + 1, dtype=complex)
            avail = min(kmax + 1, len(self.ramified_coeffs))
            c[:avail] = self.ramified_coeffs[:avail]
            return c
        return np.array(
            [schur_bialternant(self.sv, Partition((k,))) if k else 1.0 for k in range(kmax + 1)]
        )

    def inverse_powers(self, kmax):
        """mu(p^k) for k = 0..kmax."""
        if not self.ramified:
            inv = local_inverse_coefficients(self.sv)
            c = np.zeros(kmax + 1, dtype=complex)
            avail = min(kmax + 1, len(inv))
            c[:avail] = inv[:avail]
            return c
        lam = self.lambda_powers(kmax)
        inv = np.zeros(kmax + 1, dtype=complex)
        inv[0] = 1.0
        for k in range(1, kmax + 1):
            inv[k] = -np.sum(lam[1 : k + 1] * inv[k - 1 :: -1][: k])
        return inv

    def power_sums(self, kmax):
        """a(p^k) for k = 0..kmax via the Newton log-derivative recursion."""
        if not self.ramified:
            a = np.asarray(self.sv.alphas)
            return np.array([0.0 if k == 0 else np.sum(a**k) for k in range(kmax + 1)])
        lam = self.lambda_powers(kmax)
        b = np.zeros(kmax + 1, dtype=complex)
        for k in range(1, kmax + 1):
            b[k] = k * lam[k] - np.sum(b[1:k] * lam[k - 1 : 0 : -1])
        return b


@dataclass
class CoefficientTable:
    """Dense coefficient table for 1 <= n <= N; values[0] is unused."""

    kind: str
    N: int
    m: int
    values: np.ndarray = field(repr=False)

    def __getitem__(self, n):
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return complex(self.values[n])

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("n,re,im\n")
            for n in range(1, self.N + 1):
                v = self.values[n]
                fh.write(f"{n},{v.real:.17g},{v.imag:.17g}\n")

    @classmethod
    def from_csv(cls, path, kind, m):
        ns, vals = [], []
        with open(path) as fh:
            next(fh)
            for line in fh:
                n, re, im = line.split(",")
                ns.append(int(n))
                vals.append(complex(float(re), float(im)))
        values = np.zeros(max(ns) + 1, dtype=complex)
        values[np.array(ns)] = vals
        return cls(kind=kind, N=max(ns), m=m, values=values)


def build_table(model, kind, N) -> CoefficientTable:
    """Multiplicative coefficient table for the model, up to cutoff N.

    kind 'lambda' / 'mu' extend the local series coefficients
    multiplicatively; 'vonmangoldt' holds a(p^k) log p at prime powers;
    'tau_m' is the divisor-count comparison table.
    """
    if kind not in TABLE_KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    if N < 1:
        raise ValueError("N must be >= 1")
    spf = smallest_prime_factors(N)
    values = np.zeros(N + 1, dtype=complex)
    values[1] = 0.0 if kind == "vonmangoldt" else 1.0
    if kind == "tau_m":
        for n in range(2, N + 1):
            values[n] = tau_m(model.m, n, spf)
        return CoefficientTable(kind=kind, N=N, m=model.m, values=values)

    local_cache = {}

    def local_powers(p):
        if p not in local_cache:
            lf = model.local_factor(p)
            if lf is None:
                raise MissingLocalFactor(p)
            kmax = int(math.log(N) / math.log(p)) + 1
            if kind == "lambda":
                local_cache[p] = lf.lambda_powers(kmax)
            elif kind == "mu":
                local_cache[p] = lf.inverse_powers(kmax)
            else:
                local_cache[p] = lf.power_sums(kmax) * math.log(p)
        return local_cache[p]

    for n in range(2, N + 1):
        p = int(spf[n])
        pk, k, rest = p, 1, n // p
        while rest % p == 0:
            rest //= p
            pk *= p
            k += 1
        if kind == "vonmangoldt":
            values[n] = local_powers(p)[k] if rest == 1 else 0.0
        else:
            values[n] = local_powers(p)[k] * values[rest]
    return CoefficientTable(kind=kind, N=N, m=model.m, values=values)


def dirichlet_convolution(f: CoefficientTable, g: CoefficientTable) -> CoefficientTable:
    """(f*g)(n) = sum over d | n of f(d) g(n/d)."""
    if f.N != g.N or f.m != g.m:
        raise CutoffMismatch(f"({f.N}, {f.m}) vs ({g.N}, {g.m})")
    N = f.N
    values = np.zeros(N + 1, dtype=complex)
    for d in range(1, N + 1):
        fd = f.values[d]
        if fd != 0:
            mult = np.arange(1, N // d + 1)
            values[d * mult] += fd * g.values[mult]
    return CoefficientTable(kind=f"({f.kind}*{g.kind})", N=N, m=f.m, values=values)


@dataclass
class BoundReport:
    kind: str
    theta: float
    worst_ratio: float
    argmax_n: int


def bound_check(table: CoefficientTable, theta) -> BoundReport:
    """Worst |value| relative to the tau_m(n) n^theta (or m p^{k theta}) envelope."""
    if not 0 <= theta < 0.5:
        raise ValueError("theta must lie in [0, 1/2)")
    spf = smallest_prime_factors(table.N)
    worst, argmax = 0.0, 1
    for n in range(1, table.N + 1):
        v = abs(table.values[n])
        if v == 0:
            continue
        if table.kind == "vonmangoldt":
            fac = factorize(n, spf)
            if len(fac) != 1:
                continue
            p, k = fac[0]
            env = table.m * p ** (k * theta) * math.log(p)
        else:
            env = tau_m(table.m, n, spf) * n**theta
        ratio = v / env
        if ratio > worst:
            worst, argmax = ratio, n
    return BoundReport(kind=table.kind, theta=theta, worst_ratio=worst, argmax_n=argmax)


def _squarefree_divisors(n, spf):
    ps = [p for p, _ in factorize(n, spf)]
    divs = [1]
    for p in ps:
        divs += [d * p for d in divs]
    return divs


@dataclass
class ExpansionRow:
    n: int
    term: complex
    fourier_tuple: tuple  # (n_{m-1}, ..., n_1)
    factors: tuple  # (n_1, ..., n_m)


def mpower_free_expansion(model, N):
    """Rows of the inverse-coefficient expansion over n = n_1 n_2^2 ... n_m^m.

    Each row carries the signed product of elementary-symmetric local
    values; summing rows for fixed n reconstructs mu(n).
    """
    m = model.m
    spf = smallest_prime_factors(N)
    e_cache = {}

    def elem_sym(p, i):
        # e_i(alpha_p), from the inverted local factor
        if p not in e_cache:
            lf = model.local_factor(p)
            if lf is None:
                raise MissingLocalFactor(p)
            if lf.ramified:
                raise ValueError("m-power-free expansion needs unramified data")
            inv = local_inverse_coefficients(lf.sv)
            e_cache[p] = [((-1.0) ** j) * inv[j] for j in range(m + 1)]
        return e_cache[p][i]

    rows = []
    for n in range(1, N + 1):

        def descend(i, remaining, used, factors):
            if i == 0:
                if remaining == 1:
                    _emit(factors)
                return
            for d in _squarefree_divisors(remaining, spf):
                if remaining % (d**i) == 0 and math.gcd(d, used) == 1:
                    descend(i - 1, remaining // (d**i), used * d, [d] + factors)

        def _emit(factors):
            # factors = (n_1, ..., n_m); all squarefree, pairwise coprime
            sign = 1.0
            for i in range(1, m + 1, 2):
                sign *= (-1.0) ** len(factorize(factors[i - 1], spf))
            term = complex(sign)
            for i in range(1, m + 1):
                for p, _ in factorize(factors[i - 1], spf):
                    term *= elem_sym(p, i)
            rows.append(
                ExpansionRow(
                    n=n,
                    term=term,
                    fourier_tuple=tuple(factors[m - 2 :: -1]),
                    factors=tuple(factors),
                )
            )

        descend(m, n, 1, [])
    return rows


def reconstruct_mu(rows, N):
    values = np.zeros(N + 1, dtype=complex)
    for row in rows:
        values[row.n] += row.term
    return values
