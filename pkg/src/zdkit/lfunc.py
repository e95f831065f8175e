"""L-function evaluation and the mollified zero-detection identity.

Degree-one models (Dirichlet characters and the zeta shape) get full
analytic continuation through Hurwitz zeta; higher-degree models are
evaluated in the absolute-convergence region only.  On top of the
evaluators sit the completed functional equation, the mollifier, the
contour-identity zero detector and argument-principle zero counting.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli, digamma, loggamma, zeta as real_zeta

from .characters import DirichletCharacter
from .coeffs import CoefficientTable, LocalFactor, build_table
from .errors import (
    BoundaryZero,
    MissingLocalFactor,
    PoleAtOne,
    PrincipalCharacter,
    QuadratureDivergence,
    RegionError,
)
from .symfunc import SatakeVector

_BERN = bernoulli(30)


# ---------------------------------------------------------------- models


@dataclass
class LFunctionModel:
    """Degree-m Euler product with conductor q and archimedean data."""

    m: int
    q: int = 1
    kappas: tuple = ()
    entire: bool = True
    continuation: str = "none"  # "none" | "degree_one"
    locals_dict: dict = field(default_factory=dict)
    local_rule: object = None  # callable p -> LocalFactor, optional
    chi: DirichletCharacter | None = None

    def __post_init__(self):
        self.kappas = tuple(complex(k) for k in self.kappas)
        if len(self.kappas) != self.m:
            raise ValueError("need one archimedean parameter per degree")
        if self.continuation == "degree_one" and self.m != 1:
            raise ValueError("degree_one continuation requires m = 1")
        theta = 0.5 - 1.0 / (self.m**2 + 1)
        for k in self.kappas:
            if k.real < -theta - 1e-12:
                raise ValueError(f"Re(kappa) = {k.real} below -theta_m = {-theta}")

    def local_factor(self, p):
        if p in self.locals_dict:
            return self.locals_dict[p]
        if self.local_rule is not None:
            lf = self.local_rule(p)
            self.locals_dict[p] = lf
            return lf
        return None

    def to_json(self, path, pmax=None):
        locs = []
        for p in sorted(self.locals_dict):
            if pmax is not None and p > pmax:
                continue
            lf = self.locals_dict[p]
            if lf.ramified:
                locs.append({"p": p, "coeffs": _clist(lf.ramified_coeffs)})
            else:
                locs.append({"p": p, "alphas": _clist(lf.sv.alphas)})
        doc = {
            "m": self.m,
            "q": self.q,
            "kappas": _clist(self.kappas),
            "locals": locs,
            "entire": self.entire,
            "continuation": self.continuation,
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=1)

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            doc = json.load(fh)
        locals_dict = {}
        for loc in doc.get("locals", []):
            p = int(loc["p"])
            if "alphas" in loc:
                sv = SatakeVector(tuple(map(_cval, loc["alphas"])), prime=p)
                locals_dict[p] = LocalFactor(p, sv=sv)
            else:
                locals_dict[p] = LocalFactor(
                    p, ramified_coeffs=tuple(map(_cval, loc["coeffs"]))
                )
        return cls(
            m=int(doc["m"]),
            q=int(doc["q"]),
            kappas=tuple(map(_cval, doc["kappas"])),
            entire=bool(doc.get("entire", True)),
            continuation=doc.get("continuation", "none"),
            locals_dict=locals_dict,
        )


def _clist(vals):
    return [[complex(v).real, complex(v).imag] for v in vals]


def _cval(pair):
    if isinstance(pair, (int, float)):
        return complex(pair)
    return complex(pair[0], pair[1])


def zeta_model():
    """The m = 1, q = 1 shape: every Satake parameter equal to one."""
    return LFunctionModel(
        m=1,
        q=1,
        kappas=(0.0,),
        entire=False,
        continuation="degree_one",
        local_rule=lambda p: LocalFactor(p, sv=SatakeVector((1.0,), prime=p)),
    )


def model_from_character(chi: DirichletCharacter):
    """Entire degree-one model attached to a primitive character."""
    if chi.is_principal and chi.q > 1:
        raise PrincipalCharacter(f"principal character mod {chi.q}")
    if not chi.is_primitive:
        raise ValueError("character must be primitive")

    def rule(p):
        v = chi(p)
        if v == 0:
            return LocalFactor(p, ramified_coeffs=(1.0,))
        return LocalFactor(p, sv=SatakeVector((v,), prime=p))

    return LFunctionModel(
        m=1,
        q=chi.q,
        kappas=(float(chi.parity),),
        entire=chi.q > 1,
        continuation="degree_one",
        local_rule=rule,
        chi=chi,
    )


def haar_satake(m, rng, prime=2):
    """Eigenvalues of a determinant-one Haar unitary as a Satake vector."""
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / math.sqrt(2)
    qmat, r = np.linalg.qr(z)
    qmat = qmat * (np.diag(r) / np.abs(np.diag(r)))
    ev = np.linalg.eigvals(qmat)
    ev = ev / np.prod(ev) ** (1.0 / m)
    return SatakeVector(tuple(ev), prime=prime, unitary_flag=True, det_one_flag=True)


def unitary_model(m, seed=0, q=1):
    """Degree-m model with an independent Haar det-one vector at each prime."""

    def rule(p):
        rng = np.random.default_rng(np.random.SeedSequence([seed, p]))
        return LocalFactor(p, sv=haar_satake(m, rng, prime=p))

    return LFunctionModel(m=m, q=q, kappas=(0.0,) * m, entire=True, local_rule=rule)


# ------------------------------------------------------- basic evaluators


def hurwitz_zeta(s, a, terms=12):
    """Euler-Maclaurin Hurwitz zeta; accepts scalar or array s."""
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(arr == 1):
        raise PoleAtOne("Hurwitz zeta has a pole at s = 1")
    tmax = float(np.max(np.abs(arr.imag)))
    N = int(max(30, math.ceil(0.6 * tmax)))
    n = np.arange(N, dtype=float) + a
    head = np.sum(n[None, :] ** (-arr[:, None]), axis=1)
    w = N + a
    out = head + w ** (1 - arr) / (arr - 1) + 0.5 * w ** (-arr)
    rising = arr * 1.0
    wpow = w ** (-arr - 1)
    for k in range(1, terms + 1):
        out = out + (_BERN[2 * k] / math.factorial(2 * k)) * rising * wpow
        rising = rising * (arr + 2 * k - 1) * (arr + 2 * k)
        wpow = wpow / (w * w)
    return out if np.ndim(s) else complex(out[0])


def dirichlet_L(chi: DirichletCharacter, s):
    """L(s, chi) = q^{-s} sum_a chi(a) zeta(s, a/q); entire for primitive chi."""
    if chi.is_principal and chi.q > 1:
        raise PrincipalCharacter(f"principal character mod {chi.q}")
    q = chi.q
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.zeros_like(arr)
    at_pole = arr == 1
    safe = np.where(at_pole, 2.0, arr)
    for a in range(1, q + 1):
        v = chi(a)
        if v != 0:
            vals = hurwitz_zeta(safe, a / q)
            if np.any(at_pole):
                # the 1/(s-1) poles cancel over a nonprincipal character
                vals = np.where(at_pole, -digamma(a / q), vals)
            out = out + v * vals
    out = out * q ** (-arr)
    return out if np.ndim(s) else complex(out[0])


def L_value(model: LFunctionModel, s):
    """Evaluate L(s) for the model, using whatever route is available."""
    if model.continuation == "degree_one":
        if model.chi is not None:
            return dirichlet_L(model.chi, s)
        if model.q == 1:
            return hurwitz_zeta(s, 1.0)
        raise RegionError("degree-one continuation needs a character or q = 1")
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.array([evaluate_series(model, complex(z), _auto_cutoff(model, complex(z))) for z in arr])
    return out if np.ndim(s) else complex(out[0])


def series_tail_bound(model, s, N):
    """Rankin-style bound on |sum over n > N of tau_m(n) n^{theta - Re s}|."""
    theta = 0.5 - 1.0 / (model.m**2 + 1)
    x = complex(s).real - theta
    best = math.inf
    for b in 1 + np.geomspace(1e-3, max(x - 1, 2e-3), 40):
        if b >= x:
            break
        best = min(best, N ** (b - x) * float(real_zeta(b)) ** model.m)
    return best


def _auto_cutoff(model, s, tol=1e-8):
    N = 1000
    while series_tail_bound(model, s, N) > tol:
        N *= 2
        if N > 10**8:
            raise RegionError(f"series does not close at Re(s) = {s.real}")
    return N


def evaluate_series(model: LFunctionModel, s: complex, N, tol=1e-3) -> complex:
    """Truncated Dirichlet series sum_{n<=N} lambda(n) n^{-s}.

    Rejects evaluation points whose certified tail bound exceeds tol;
    callers needing a specific accuracy should compare against
    series_tail_bound directly.
    """
    bound = series_tail_bound(model, s, N)
    if bound > tol:
        raise RegionError(
            f"tail bound {bound:.3g} beyond N = {N} at Re(s) = {complex(s).real}"
        )
    lam = build_table(model, "lambda", N)
    n = np.arange(1, N + 1, dtype=float)
    return complex(np.sum(lam.values[1:] * n ** (-complex(s))))


def euler_product(model: LFunctionModel, s: complex, P) -> complex:
    """Product over p <= P of the inverted local factors at p^{-s}."""
    from .coeffs import primes_up_to

    out = 1.0 + 0.0j
    for p in primes_up_to(P):
        lf = model.local_factor(p)
        if lf is None:
            raise MissingLocalFactor(p)
        inv = lf.inverse_powers(model.m)
        x = p ** (-complex(s))
        out /= sum(c * x**j for j, c in enumerate(inv))
    return out


def analytic_conductor(model: LFunctionModel, t) -> float:
    """q times prod_j (3 + |it + kappa_j|)."""
    out = float(model.q)
    for k in model.kappas:
        out *= 3 + abs(1j * t + k)
    return out


def _gamma_log_factor(model, arr):
    logfac = 0.5 * arr * math.log(model.q)
    for k in model.kappas:
        z = (arr + k) / 2
        logfac = logfac - z * math.log(math.pi) + loggamma(z)
    return logfac


def completed_lambda(model: LFunctionModel, s):
    """q^{s/2} L(s) prod_j pi^{-(s+kappa_j)/2} Gamma((s+kappa_j)/2)."""
    if model.continuation != "degree_one":
        raise RegionError("completed function implemented for degree-one models")
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.exp(_gamma_log_factor(model, arr)) * L_value(model, arr)
    return out if np.ndim(s) else complex(out[0])


def _rotated_completed(model, arr):
    """Same argument as the completed function, with the positive real
    magnitude of the gamma factor divided out (avoids underflow at large T)."""
    logfac = _gamma_log_factor(model, arr)
    return np.exp(1j * np.imag(logfac)) * L_value(model, arr)


def _dual_model(model: LFunctionModel):
    if model.chi is not None:
        return model_from_character(model.chi.conjugate())
    return model


def root_number(model: LFunctionModel, ref=0.5 + 0.7j):
    """Empirical W with Lambda(s) = W * Lambda_dual(1 - s)."""
    dual = _dual_model(model)
    num = completed_lambda(model, ref)
    den = completed_lambda(dual, 1 - ref)
    W = num / den
    if abs(abs(W) - 1) > 1e-8:
        raise ValueError(f"|W| = {abs(W)} not on the unit circle")
    return W


def functional_equation_residual(model: LFunctionModel, s: complex) -> float:
    """Relative deviation of Lambda(s) from W * Lambda_dual(1-s)."""
    if not model.entire or model.continuation != "degree_one":
        raise RegionError("functional equation check needs an entire degree-one model")
    W = root_number(model)
    lhs = completed_lambda(model, s)
    rhs = W * completed_lambda(_dual_model(model), 1 - complex(s))
    return abs(lhs - rhs) / max(abs(lhs), 1e-30)


# ----------------------------------------------------- mollifier, detector


@dataclass
class MollifierTruncation:
    X: int
    mu_table: CoefficientTable

    def __post_init__(self):
        if self.X < 1 or self.mu_table.N < self.X:
            raise ValueError("need X >= 1 and a mu table reaching X")

    @classmethod
    def build(cls, model, X):
        return cls(X=X, mu_table=build_table(model, "mu", X))


def mollifier_eval(moll: MollifierTruncation, s):
    """M_X(s) = sum_{n<=X} mu(n) n^{-s}, exact finite sum."""
    arr = np.atleast_1d(np.asarray(s, dtype=complex))
    n = np.arange(1, moll.X + 1, dtype=float)
    out = np.sum(moll.mu_table.values[1 : moll.X + 1][None, :] * n[None, :] ** (-arr[:, None]), axis=1)
    return out if np.ndim(s) else complex(out[0])


@dataclass
class DetectionConfig:
    X: int
    Y: float
    delta: float = 0.25
    A: float | None = None
    contour_halfheight: float | None = None
    quadrature_step: float | None = None

    def __post_init__(self):
        if not 0 < self.delta < 0.5:
            raise ValueError("delta must lie in (0, 1/2)")
        if self.A is None:
            self.A = (3 - self.delta) / (2 * self.delta)
        if self.contour_halfheight is None:
            self.contour_halfheight = 10 * math.log(self.Y)
        if self.quadrature_step is None:
            self.quadrature_step = min(0.01, self.contour_halfheight / 4000)


@dataclass
class DetectorReport:
    residual: float
    asymptotic_gap: float
    integral1: complex
    integral2: complex
    lm_at_rho: complex
    nonzero_input: bool


def _gamma(w):
    return np.exp(loggamma(w))


def zero_detector(model: LFunctionModel, rho: complex, cfg: DetectionConfig) -> DetectorReport:
    """Evaluate the two-contour identity for e^{-1/Y} at a putative zero.

    The identity splits the Cahen-Mellin integral of Gamma(w) Y^w across a
    right contour carrying 1 - L*M_X and a left contour carrying L*M_X;
    when L(rho) = 0 both pieces are quadrature-closeable and their sum
    returns e^{-1/Y}.  At a non-zero the left contour crossing picks up
    the residue L(rho)M_X(rho), which the report flags.
    """
    if model.continuation != "degree_one" or not model.entire:
        raise RegionError("detector needs an entire degree-one model")
    beta = rho.real
    moll = MollifierTruncation.build(model, cfg.X)

    def LM(w):
        return L_value(model, rho + w) * mollifier_eval(moll, rho + w)

    lm0 = complex(LM(np.array([0.0 + 0.0j]))[0])
    nonzero = abs(complex(L_value(model, rho))) > 1e-6

    c1 = 1 - beta + cfg.A
    c2 = 0.5 - beta - 1 / math.log(cfg.Y)
    H = cfg.contour_halfheight
    v = np.arange(-H, H + cfg.quadrature_step / 2, cfg.quadrature_step)

    def contour(c, f):
        w = c + 1j * v
        vals = f(w) * _gamma(w) * np.power(cfg.Y, w)
        # decay envelope at the truncation boundary (Stirling magnitude)
        edge = max(abs(vals[0]), abs(vals[-1]))
        envelope = math.exp(-math.pi * H / 2 + (c + 2) * math.log(2 + H)) * cfg.Y**c
        if edge > max(envelope * 1e3, 1e-12):
            raise QuadratureDivergence(
                f"integrand {edge:.3g} above envelope {envelope:.3g} at |Im w| = {H}"
            )
        return complex(np.trapezoid(vals, dx=cfg.quadrature_step) / (2 * math.pi))

    I1 = contour(c1, lambda w: 1 - LM(w))
    I2 = contour(c2, LM)
    total = I1 + I2
    target = math.exp(-1 / cfg.Y)
    return DetectorReport(
        residual=abs(target - total),
        asymptotic_gap=abs(1 - total),
        integral1=I1,
        integral2=I2,
        lm_at_rho=lm0,
        nonzero_input=nonzero,
    )


# ------------------------------------------------------------ zero counts


def _track_argument(values):
    """Total winding (in turns) along a closed loop of nonzero values."""
    phases = np.angle(values)
    d = np.diff(phases)
    d = (d + math.pi) % (2 * math.pi) - math.pi
    return float(np.sum(d) / (2 * math.pi))


def count_zeros_rectangle(model: LFunctionModel, sigma: float, T: float) -> int:
    """Winding number of the completed function around [sigma,1] x [-T,T]."""
    if not model.entire or model.continuation != "degree_one":
        raise RegionError("zero counting needs an entire degree-one model")
    for attempt in range(5):
        Tc = T + attempt * 1e-4
        corners = [
            complex(sigma, -Tc),
            complex(1, -Tc),
            complex(1, Tc),
            complex(sigma, Tc),
            complex(sigma, -Tc),
        ]
        pts = []
        for z0, z1 in zip(corners[:-1], corners[1:]):
            n = max(200, int(40 * abs(z1 - z0)))
            pts.append(z0 + (z1 - z0) * np.linspace(0, 1, n, endpoint=False))
        path = np.concatenate(pts + [np.array([corners[-1]])])
        vals = _rotated_completed(model, path)
        if np.min(np.abs(vals)) < 1e-10:
            continue
        # adaptive refinement: split any step turning more than ~1 radian
        for _ in range(12):
            d = np.abs(np.diff(np.angle(vals)))
            d = np.minimum(d, 2 * math.pi - d)
            bad = np.nonzero(d > 1.0)[0]
            if len(bad) == 0:
                break
            mids = (path[bad] + path[bad + 1]) / 2
            midvals = _rotated_completed(model, mids)
            path = np.insert(path, bad + 1, mids)
            vals = np.insert(vals, bad + 1, midvals)
        else:
            continue
        if np.min(np.abs(vals)) < 1e-10:
            continue
        turns = _track_argument(vals)
        n = int(round(turns))
        if abs(turns - n) > 0.25:
            continue
        return n
    raise BoundaryZero(f"could not stabilize the contour at T = {T}")


def rvm_estimate(model: LFunctionModel, T) -> float:
    """(T/pi) log(q (T/(2 pi e))^m), the smooth zero-count approximation."""
    if T < 2:
        raise ValueError("T must be >= 2")
    return (T / math.pi) * math.log(model.q * (T / (2 * math.pi * math.e)) ** model.m)
