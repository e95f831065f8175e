"""Critical-line zero location by sign changes of rotated completed functions.

The zeta line uses the classical rotation e^{i theta(t)} zeta(1/2+it);
real primitive characters use the analogous rotation of the completed
function, made real by splitting off the square root of the root number.
Ordinates are refined by bisection to about 1e-8.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq
from scipy.special import loggamma

from .characters import DirichletCharacter
from .lfunc import dirichlet_L, hurwitz_zeta, model_from_character, root_number

_CHUNK = 2048


def _chunked(f, ts):
    out = np.empty(len(ts))
    for i in range(0, len(ts), _CHUNK):
        out[i : i + _CHUNK] = f(ts[i : i + _CHUNK])
    return out


def zeta_hardy(ts):
    """Z(t) = e^{i theta(t)} zeta(1/2 + it), real for real t."""
    ts = np.atleast_1d(np.asarray(ts, dtype=float))

    def block(t):
        s = 0.5 + 1j * t
        theta = np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * math.log(math.pi)
        return np.real(np.exp(1j * theta) * hurwitz_zeta(s, 1.0))

    return _chunked(block, ts)


def character_hardy(chi: DirichletCharacter, ts):
    """Rotated completed L(1/2+it, chi) for a real primitive character."""
    if not chi.is_real:
        raise ValueError("rotation to a real function needs a real character")
    model = model_from_character(chi)
    W = root_number(model)
    rot = W ** (-0.5)
    kappa = float(chi.parity)
    q = chi.q
    ts = np.atleast_1d(np.asarray(ts, dtype=float))

    def block(t):
        s = 0.5 + 1j * t
        phase = np.imag(
            0.5 * s * math.log(q)
            - 0.5 * (s + kappa) * math.log(math.pi)
            + loggamma((s + kappa) / 2)
        )
        return np.real(rot * np.exp(1j * phase) * dirichlet_L(chi, s))

    return _chunked(block, ts)


def _sign_change_zeros(f, T, step, t0=1e-6):
    ts = np.arange(t0, T + step, step)
    vals = f(ts)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    zeros = []
    for i in idx:
        g = brentq(lambda t: float(f(np.array([t]))[0]), ts[i], ts[i + 1], xtol=1e-10)
        if g <= T:
            zeros.append(g)
    return zeros


_zeta_cache = {}
_chi_cache = {}


def zeta_critical_zeros(T, step=0.02):
    """Ordinates of zeta zeros with 0 < gamma <= T, by Hardy sign changes."""
    key = (round(T, 6), step)
    if key not in _zeta_cache:
        _zeta_cache[key] = _sign_change_zeros(zeta_hardy, T, step)
    return list(_zeta_cache[key])


def dirichlet_critical_zeros(chi, T, step=0.02):
    """Positive ordinates of L(s, chi) zeros up to T, real primitive chi."""
    key = (chi.q, chi.label, round(T, 6), step)
    if key not in _chi_cache:
        _chi_cache[key] = _sign_change_zeros(lambda ts: character_hardy(chi, ts), T, step)
    return list(_chi_cache[key])


def write_zero_file(path, gammas):
    """One ordinate per line, the interchange format for zero datasets."""
    with open(path, "w") as fh:
        for g in gammas:
            fh.write(f"{g:.12f}\n")
