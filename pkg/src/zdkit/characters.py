"""Dirichlet characters as dense value tables.

Characters mod q are built from generators of (Z/q)^* (CRT over prime
powers, with the usual split presentation at powers of two) and carried
around as length-q arrays of values indexed by residue.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


def _primitive_root(p, k):
    """A generator of (Z/p^k)^* for odd prime p."""
    phi = p - 1
    fac = set()
    x, f = phi, 2
    while f * f <= x:
        while x % f == 0:
            fac.add(f)
            x //= f
        f += 1
    if x > 1:
        fac.add(x)
    g = 2
    while any(pow(g, phi // q, p) == 1 for q in fac):
        g += 1
    if k > 1 and pow(g, phi, p * p) == 1:
        g += p
    return g


def _unit_group(q):
    """Generators and their orders for (Z/q)^*, as parallel lists."""
    gens, orders = [], []
    x = q
    p = 2
    while x > 1:
        if x % p:
            p += 1
            continue
        k = 0
        pk = 1
        while x % p == 0:
            x //= p
            pk *= p
            k += 1
        rest = q // pk
        if p == 2:
            if k == 2:
                comp = [(3, 2)]
            elif k >= 3:
                comp = [(pk - 1, 2), (3, 2 ** (k - 2))]
            else:
                comp = []
        else:
            comp = [(_primitive_root(p, k), pk // p * (p - 1))]
        for g, order in comp:
            # lift g to a generator of the p-part that is 1 mod the rest
            if rest > 1:
                inv = pow(rest, -1, pk)
                g = (g * rest * inv + pk * pow(pk, -1, rest)) % q
            gens.append(g % q)
            orders.append(order)
    return gens, orders


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q; values[a] = chi(a), zero off the units."""

    q: int
    values: tuple = field(repr=False)
    label: tuple = ()  # exponent tuple w.r.t. the fixed generators

    def __post_init__(self):
        def snap(x):
            return round(x) if abs(x - round(x)) < 1e-12 else x

        object.__setattr__(
            self,
            "values",
            tuple(complex(snap(v.real), snap(v.imag)) for v in map(complex, self.values)),
        )
        if len(self.values) != self.q:
            raise ValueError("values must have length q")

    def __call__(self, n):
        return self.values[n % self.q]

    def value_array(self, N):
        """chi(1..N) as a numpy array (index 0 unused)."""
        base = np.asarray(self.values)
        idx = np.arange(N + 1) % self.q
        out = base[idx]
        out[0] = 0.0
        return out

    @property
    def is_principal(self):
        return all(v in (0, 1) or abs(v - 1) < 1e-12 for v in self.values)

    @property
    def parity(self):
        """0 for even (chi(-1)=1), 1 for odd."""
        return 0 if abs(self.values[self.q - 1] - 1) < 1e-9 else 1

    @property
    def is_real(self):
        return all(abs(v.imag) < 1e-12 for v in self.values)

    def conjugate(self):
        return DirichletCharacter(
            self.q, tuple(v.conjugate() for v in self.values), self.label
        )

    def conductor(self):
        """Smallest modulus the character factors through."""
        for d in sorted(_divisors(self.q)):
            if all(
                abs(self.values[a % self.q] - 1) < 1e-9
                for a in range(1, self.q + 1)
                if a % d == 1 % d and math.gcd(a, self.q) == 1
            ):
                return d
        return self.q

    @property
    def is_primitive(self):
        return self.conductor() == self.q

    def gauss_sum(self):
        """sum_a chi(a) e(a/q)."""
        return sum(
            self.values[a] * cmath.exp(2j * cmath.pi * a / self.q)
            for a in range(self.q)
        )


def _divisors(q):
    out = []
    d = 1
    while d * d <= q:
        if q % d == 0:
            out.append(d)
            if d != q // d:
                out.append(q // d)
        d += 1
    return out


@lru_cache(maxsize=None)
def all_characters(q):
    """Every Dirichlet character mod q, principal first."""
    if q == 1:
        return (DirichletCharacter(1, (1.0,), ()),)
    gens, orders = _unit_group(q)
    # discrete log table: residue -> exponent tuple
    dlog = {1: (0,) * len(gens)}
    frontier = [1]
    for i, (g, order) in enumerate(zip(gens, orders)):
        table = dict(dlog)
        for a, e in dlog.items():
            x = a
            for t in range(1, order):
                x = x * g % q
                te = list(e)
                te[i] = t
                table[x] = tuple(te)
        dlog = table
    chars = []
    from itertools import product

    for label in product(*(range(d) for d in orders)):
        values = [0.0] * q
        for a, e in dlog.items():
            phase = sum(c * t / d for c, t, d in zip(label, e, orders))
            values[a] = cmath.exp(2j * cmath.pi * phase)
        chars.append(DirichletCharacter(q, tuple(values), label))
    chars.sort(key=lambda c: c.label)
    return tuple(chars)


def primitive_characters(q):
    return tuple(c for c in all_characters(q) if c.is_primitive)


def real_primitive_character(q):
    """The unique real primitive character mod q, when one exists."""
    cands = [c for c in primitive_characters(q) if c.is_real and not c.is_principal]
    if not cands:
        raise ValueError(f"no real primitive character mod {q}")
    return cands[0]
