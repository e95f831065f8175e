"""Statistics of zero ordinates.

Ingestion of zero files, star discrepancy of fractional parts {alpha
gamma}, the Selberg majorant/minorant trigonometric polynomials, the
Landau-type prime-power concentration sum, the cosine-autocorrelation
test function and its Laplace transform, the explicit-formula balance,
and the family-averaged equidistribution bound.
"""

from __future__ import annotations

import cmath
import functools
import importlib.resources
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.special import digamma

from .coeffs import build_table, factorize
from .errors import (
    IncompleteDataset,
    ParseError,
    PositivityViolation,
    RangeError,
    UnsortedInput,
)


# ----------------------------------------------------------------- datasets


@dataclass
class ZeroDataset:
    """Sorted positive ordinates, optionally standing for +-gamma pairs."""

    label: str
    ordinates: tuple
    T_max: float
    symmetric: bool = True
    source: str = "ingested"  # "ingested" | "computed"
    betas: tuple | None = None  # per-zero Re(rho) override, default 1/2

    def __post_init__(self):
        ords = tuple(float(g) for g in self.ordinates)
        if any(b >= a for a, b in zip(ords[1:], ords)):
            raise UnsortedInput(f"ordinates of {self.label} not strictly increasing")
        if ords and ords[-1] > self.T_max + 1e-12:
            raise ValueError("ordinate beyond T_max")
        self.ordinates = ords

    def __len__(self):
        return len(self.ordinates)

    def up_to(self, T):
        if T > self.T_max + 1e-12:
            raise RangeError(f"T = {T} beyond dataset height {self.T_max}")
        arr = np.asarray(self.ordinates)
        return arr[arr <= T]

    def beta(self, i):
        return 0.5 if self.betas is None else self.betas[i]


def ingest_zeros(path, label, T_max) -> ZeroDataset:
    """Read one ascending ordinate per line into a dataset."""
    ords = []
    with open(path) as fh:
        for i, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                ords.append(float(text))
            except ValueError:
                raise ParseError(i, text) from None
    return ZeroDataset(label=label, ordinates=tuple(ords), T_max=T_max)


# ---------------------------------------------------------- discrepancy


def star_discrepancy(points):
    """Exact sup over [0,t) intervals of |count/N - t|, sorted formula."""
    pts = np.sort(np.asarray(points, dtype=float))
    if len(pts) == 0:
        raise ValueError("need at least one point")
    if np.any((pts < 0) | (pts >= 1)):
        raise ValueError("points must lie in [0, 1)")
    N = len(pts)
    i = np.arange(1, N + 1)
    return float(np.max(np.maximum(i / N - pts, pts - (i - 1) / N)))


def _frac_parts(gammas, alpha, symmetric):
    x = np.mod(alpha * np.asarray(gammas, dtype=float), 1.0)
    if symmetric:
        # {-y} = 1 - {y} away from integers; fold the mirrored ordinates in
        neg = np.mod(-alpha * np.asarray(gammas, dtype=float), 1.0)
        x = np.concatenate([x, neg])
    return x


def fujii_statistic(zd: ZeroDataset, alpha, T):
    """Star discrepancy of {alpha gamma} over the zeros with |gamma| <= T."""
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    gs = zd.up_to(T)
    return star_discrepancy(_frac_parts(gs, alpha, zd.symmetric))


# ------------------------------------------------- Selberg trig polynomials


@dataclass(frozen=True)
class Interval:
    u: float
    v: float

    def __post_init__(self):
        if not 0 <= self.u <= self.v <= 1:
            raise ValueError("need 0 <= u <= v <= 1")

    @property
    def length(self):
        return self.v - self.u

    def indicator(self, x):
        f = np.mod(x, 1.0)
        return ((self.u <= f) & (f <= self.v)).astype(float)


@dataclass
class TrigPolynomial:
    M: int
    a: dict  # n -> complex, |n| <= M
    kind: str  # "majorant" | "minorant"
    interval: Interval

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for n, c in self.a.items():
            out = out + c * np.exp(2j * math.pi * n * x)
        return np.real_if_close(out).real


def _vaaler_weight(t):
    # pi t (1-t) cot(pi t) + t on (0,1)
    return math.pi * t * (1 - t) / math.tan(math.pi * t) + t


def _sawtooth_poly(x, M):
    """Degree-M approximation to the sawtooth {x} - 1/2 (x not integer)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for h in range(1, M + 1):
        out -= _vaaler_weight(h / (M + 1)) * np.sin(2 * math.pi * h * x) / (math.pi * h)
    return out


def _fejer(x, M):
    x = np.asarray(x, dtype=float)
    out = np.ones_like(x)
    for n in range(1, M + 1):
        out += 2 * (1 - n / (M + 1)) * np.cos(2 * math.pi * n * x)
    return out


def selberg_values(interval: Interval, M, x, sign):
    """Pointwise majorant (+1) / minorant (-1) of the interval indicator."""
    u, v = interval.u, interval.v
    base = (v - u) + _sawtooth_poly(x - v, M) - _sawtooth_poly(x - u, M)
    corr = (_fejer(x - v, M) + _fejer(x - u, M)) / (2 * M + 2)
    return base + sign * corr


def indicator_fourier(interval: Interval, n):
    """Fourier coefficient of the interval indicator on the circle."""
    if n == 0:
        return complex(interval.length)
    e = lambda t: cmath.exp(-2j * math.pi * n * t)
    return (e(interval.v) - e(interval.u)) / (-2j * math.pi * n)


def selberg_coefficient(interval: Interval, M, n, sign):
    """Closed-form coefficient of the degree-M majorant/minorant."""
    u, v = interval.u, interval.v
    if n == 0:
        return complex(v - u + sign / (M + 1))
    if abs(n) > M:
        return 0.0 + 0.0j
    e = lambda t: cmath.exp(-2j * math.pi * n * t)
    saw_hat = -_vaaler_weight(abs(n) / (M + 1)) / (2j * math.pi * n)
    fejer_part = (1 - abs(n) / (M + 1)) * (e(v) + e(u)) / (2 * M + 2)
    return saw_hat * (e(v) - e(u)) + sign * fejer_part


def beurling_selberg(interval: Interval, M):
    """Majorant and minorant trig polynomials with coefficients read by FFT.

    The construction is evaluated pointwise and its spectrum extracted by
    a discrete Fourier transform on an oversampled grid; the closed-form
    coefficient formula is kept separate as an independent check.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    K = 4 * (M + 1)
    x = np.arange(K) / K
    out = []
    for sign, kind in [(+1, "majorant"), (-1, "minorant")]:
        vals = selberg_values(interval, M, x, sign)
        spec = np.fft.fft(vals) / K
        a = {}
        for n in range(-M, M + 1):
            a[n] = complex(spec[n % K])
        out.append(TrigPolynomial(M=M, a=a, kind=kind, interval=interval))
    return out[0], out[1]


# -------------------------------------------------------- Landau-type sum


def _nearest_integer(x):
    """Integer closest to x, half-integer ties to the even integer."""
    lo = math.floor(x)
    if x - lo == 0.5:
        return lo if lo % 2 == 0 else lo + 1
    return round(x)


def landau_gonek_sum(zd: ZeroDataset, x, T, model=None):
    """Sum of x^{rho - 1/2} over |gamma| <= T against its prime-power term."""
    if x <= 1:
        raise ValueError("x must exceed 1")
    gs = zd.up_to(T)
    logx = math.log(x)
    total = 0.0 + 0.0j
    for i, g in enumerate(gs):
        b = zd.beta(i)
        term = x ** (b - 0.5) * cmath.exp(1j * g * logx)
        total += term
        if zd.symmetric:
            total += x ** (b - 0.5) * cmath.exp(-1j * g * logx)
    nx = _nearest_integer(x)
    avl = 0.0 + 0.0j
    if nx >= 2:
        fac = factorize(nx)
        if len(fac) == 1:
            p, k = fac[0]
            if model is None:
                avl = math.log(p)  # a identically one
            else:
                avl = complex(build_table(model, "vonmangoldt", nx).values[nx])
    sinc_arg = T * math.log(x / nx) if nx >= 1 else 0.0
    sinc = 1.0 if sinc_arg == 0 else math.sin(sinc_arg) / sinc_arg
    main = -(T / math.pi) * sinc * avl / math.sqrt(x)
    return complex(total), complex(main), abs(total - main)


# ------------------------------------------------------ Poitou function


def _load_golden():
    path = importlib.resources.files("zdkit").joinpath("data/poitou_constants.json")
    with path.open() as fh:
        return json.load(fh)


@dataclass
class PoitouFunction:
    """Even test function on [-1,1] whose Laplace transform has
    nonnegative real part on the unit strip.

    psi(t) = h(t)/cosh(t) with h(t) = (1-|t|)cos(pi t) + sin(pi|t|)/pi.
    The cosine transform of psi(t)cosh(t) = h(t) is the nonnegative
    kernel 8 pi^2 cos^2(y/2)/(pi^2-y^2)^2, which gives Re Psi >= 0 on
    the boundary lines Re z = +-1; harmonicity of Re Psi plus decay then
    spreads the positivity through the strip.
    """

    golden: dict = field(default_factory=_load_golden)

    @staticmethod
    def psi(t):
        t = np.asarray(t, dtype=float)
        a = np.abs(t)
        h = (1 - a) * np.cos(math.pi * t) + np.sin(math.pi * a) / math.pi
        return np.where(a <= 1, h / np.cosh(t), 0.0)

    def Psi_array(self, zs):
        """Laplace transform over [-1,1] by Gauss-Legendre quadrature,
        with the node count tied to the fastest oscillation in the batch."""
        zs = np.atleast_1d(np.asarray(zs, dtype=complex))
        if len(zs) == 0:
            return np.zeros(0, dtype=complex)
        n = int(min(6000, max(256, 2 * np.max(np.abs(zs.imag)))))
        t, f = _gl_rule(n)
        out = np.empty(len(zs), dtype=complex)
        for i in range(0, len(zs), 1000):
            chunk = zs[i : i + 1000]
            out[i : i + 1000] = (
                np.exp(-np.outer(chunk, t)) + np.exp(np.outer(chunk, t))
            ) @ f
        return out

    def Psi(self, z):
        return complex(self.Psi_array(np.array([z]))[0])

    def Psi_quadrature(self, z):
        """Direct adaptive quadrature of the Laplace integral (slow route)."""
        z = complex(z)
        f = lambda t: float(self.psi(t)) * cmath.exp(-t * z)
        re, _ = quad(lambda t: f(t).real, -1, 1, limit=400)
        im, _ = quad(lambda t: f(t).imag, -1, 1, limit=400)
        return complex(re, im)


@functools.lru_cache(maxsize=8)
def _gl_rule(n):
    x, w = np.polynomial.legendre.leggauss(n)
    t = (x + 1) / 2
    f = PoitouFunction.psi(t) * w / 2
    return t, f


def poitou_function() -> PoitouFunction:
    """Construct the test function and verify its contract on grids."""
    pf = PoitouFunction()
    if abs(float(pf.psi(0.0)) - 1.0) > 1e-12:
        raise PositivityViolation("psi(0) != 1")
    t = np.linspace(-1.5, 1.5, 601)
    vals = pf.psi(t)
    if np.any(vals < -1e-12):
        raise PositivityViolation("psi takes negative values")
    if np.max(np.abs(vals - pf.psi(-t))) > 1e-12:
        raise PositivityViolation("psi not even")
    if np.any(np.abs(vals[np.abs(t) > 1]) > 1e-12):
        raise PositivityViolation("psi not supported in [-1,1]")
    # strip positivity of Re Psi on |Re z| <= 1, |Im z| <= 50
    xs = np.linspace(-1, 1, 20)
    ys = np.linspace(-50, 50, 50)
    for x in xs:
        row = pf.Psi_array(x + 1j * ys).real
        if np.min(row) < -1e-10:
            raise PositivityViolation(
                f"Re Psi < 0 at {complex(x, ys[np.argmin(row)])}"
            )
    # k = 3 decay instance: |Psi(z)| (1+|z|)^3 e^{-|Re z|} bounded
    for y in [10, 100, 1000]:
        for x in [0, 1, -1]:
            z = complex(x, y)
            if abs(pf.Psi(z)) * (1 + abs(z)) ** 3 * math.exp(-abs(x)) > 1e3:
                raise PositivityViolation(f"decay envelope fails at {z}")
    return pf


# ----------------------------------------------------- explicit formula


def _psi_tail_bound(model, H, logx, C4):
    """Envelope on the zero-side tail above height H (density times decay).

    C4 must dominate |Psi(iy)| (1+y)^4 for y >= H log x; the stored tail
    constant is the supremum over y >= 50.
    """
    if H * logx < 50:
        raise IncompleteDataset("tail envelope calibrated for H log x >= 50")

    def integrand(t):
        dens = math.log(model.q * (max(t, 2) / (2 * math.pi)) ** model.m) / math.pi
        return dens * C4 / (1 + t * logx) ** 4

    val, _ = quad(integrand, H, np.inf, limit=200)
    return 2 * val


@dataclass
class ExplicitFormulaReport:
    zero_side: float
    arithmetic_side: float
    residual: float
    tail_bound: float


def explicit_formula_balance(model, zd: ZeroDataset, x) -> ExplicitFormulaReport:
    """Balance the zero sum of Psi((rho-1/2) log x) against prime powers.

    Arithmetic side: log(q/pi^m)/log x minus the psi-weighted prime-power
    sum, plus the archimedean digamma integral (1/4pi normalization from
    the ds -> dt change of variable on the critical line).
    """
    logx = math.log(x)
    if logx < 1e-2:
        raise ValueError("x too close to 1 for the 1/log x normalization")
    pf = PoitouFunction()
    H = zd.T_max
    tail = _psi_tail_bound(model, H, logx, pf.golden["decay_C4_tail"])
    if tail > 1e-6:
        raise IncompleteDataset(
            f"zero-side tail bound {tail:.3g} above 1e-6 at height {H}"
        )
    gs = zd.up_to(zd.T_max)
    betas = np.array([zd.beta(i) for i in range(len(gs))])
    args = (betas - 0.5 + 1j * gs) * logx
    zero_side = float(np.sum(pf.Psi_array(args).real))
    if zd.symmetric:
        zero_side += float(np.sum(pf.Psi_array(np.conj(args)).real))

    N = int(math.exp(logx))  # psi support cuts the sum at n <= x
    vm = build_table(model, "vonmangoldt", max(N, 2))
    ns = np.arange(2, N + 1)
    coeffs = np.real(vm.values[2 : N + 1]) / np.sqrt(ns)
    prime_sum = float(np.sum(coeffs * pf.psi(np.log(ns) / logx)))
    arith = math.log(model.q / math.pi**model.m) / logx - 2 * prime_sum / logx

    ts = np.arange(-H, H, 0.02)
    dig = np.zeros(len(ts))
    for k in model.kappas:
        dig += np.real(digamma((0.5 + 1j * ts + k) / 2))
        dig += np.real(digamma((0.5 + 1j * ts + k.conjugate()) / 2))
    val = float(np.trapezoid(dig * pf.Psi_array(1j * ts * logx).real, ts))
    arith += val / (4 * math.pi)
    return ExplicitFormulaReport(
        zero_side=zero_side,
        arithmetic_side=arith,
        residual=abs(zero_side - arith),
        tail_bound=tail,
    )


# ------------------------------------------------- family equidistribution


@dataclass
class FamilyBoundReport:
    bound: float
    direct: float
    M: int
    per_dataset_bounds: tuple


def family_equidistribution(datasets, alpha, T, M, endpoints=45):
    """Averaged discrepancy bound via the majorant/minorant coefficients.

    bound = 2 sup_I max_pm |sum_{1<=n<=M} a_pm(n) avg_n| + 1/M with
    avg_n the family average of the normalized zero sums at x_n =
    e^{2 pi n |alpha|}; the direct averaged discrepancy is returned for
    comparison and must sit below the bound.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    for zd in datasets:
        if zd.T_max < T - 1e-12:
            raise IncompleteDataset(f"{zd.label} only reaches {zd.T_max} < {T}")
    a_abs = abs(alpha)

    def exp_avg(n):
        tot = 0.0 + 0.0j
        for zd in datasets:
            gs = zd.up_to(T)
            count = (2 if zd.symmetric else 1) * len(gs)
            if count == 0:
                continue
            # x_n^{i gamma} with x_n = e^{2 pi n |alpha|}
            vals = np.exp(1j * 2 * math.pi * n * a_abs * gs)
            s = np.sum(vals)
            if zd.symmetric:
                s = s + np.conj(s)
            tot += s / count
        return tot / len(datasets)

    avgs = {n: exp_avg(n) for n in range(1, M + 1)}

    grid = np.linspace(0, 1, endpoints)
    best = 0.0
    for i in range(len(grid)):
        for j in range(i, len(grid)):
            iv = Interval(float(grid[i]), float(grid[j]))
            for sign in (+1, -1):
                s = sum(
                    selberg_coefficient(iv, M, n, sign) * avgs[n]
                    for n in range(1, M + 1)
                )
                best = max(best, abs(s))
    bound = 2 * best + 1 / M

    # direct averaged discrepancy on the same interval grid
    fracs = [
        _frac_parts(zd.up_to(T), a_abs, zd.symmetric) for zd in datasets
    ]
    direct = 0.0
    for i in range(len(grid)):
        for j in range(i, len(grid)):
            u, v = float(grid[i]), float(grid[j])
            dev = (
                sum(float(np.mean((u <= f) & (f < v))) for f in fracs) / len(datasets)
                - (v - u)
            )
            direct = max(direct, abs(dev))

    singles = tuple(
        family_equidistribution([zd], alpha, T, M, endpoints).bound
        if len(datasets) > 1
        else bound
        for zd in datasets
    )
    return FamilyBoundReport(bound=bound, direct=direct, M=M, per_dataset_bounds=singles)
