"""Special functions used by the profile catalog and the series expansion.

All functions accept scalars or numpy arrays and return the same shape.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import erfc

__all__ = [
    "CATALAN",
    "DAWSON_MAX",
    "dawson",
    "lambert_w0",
    "lambert_w0_exp",
    "gamma_upper_half",
    "ierfc",
    "log_gamma",
    "gamma_ratio_recurrence",
]

#: Catalan's constant, sum_{n>=0} (-1)^n / (2n+1)^2.
CATALAN = 0.9159655941772190

#: Global maximum of the Dawson function (attained at x = 0.9241388730...).
DAWSON_MAX = 0.5410442246351818

_SQRT_PI = math.sqrt(math.pi)

# Rybicki sampling step; discretisation error ~ exp(-(pi / 2h)^2) ~ 7e-18.
_RYB_H = 0.25
_RYB_TERMS = 14
_RYB_C = np.exp(-(((2.0 * np.arange(1, _RYB_TERMS + 1) - 1.0) * _RYB_H) ** 2))
_DAWSON_SERIES_MAX = 0.2
_DAWSON_ASYMPTOTIC_MIN = 10.0


def _dawson_series(x):
    # F(x) = sum_k (-1)^k 2^k x^(2k+1) / (2k+1)!!
    x2 = x * x
    term = x.copy()
    total = x.copy()
    for k in range(1, 14):
        term = term * (-2.0 * x2) / (2 * k + 1)
        total = total + term
    return total


def _dawson_rybicki(x):
    ax = np.abs(x)
    n0 = 2.0 * np.floor(0.5 * ax / _RYB_H + 0.5)
    xp = ax - n0 * _RYB_H
    e1 = np.exp(2.0 * xp * _RYB_H)
    e2 = e1 * e1
    d1 = n0 + 1.0
    d2 = d1 - 2.0
    total = np.zeros_like(ax)
    for c in _RYB_C:
        total += c * (e1 / d1 + 1.0 / (d2 * e1))
        d1 = d1 + 2.0
        d2 = d2 - 2.0
        e1 = e1 * e2
    return np.sign(x) * np.exp(-xp * xp) * total / _SQRT_PI


def _dawson_asymptotic(x):
    # F(x) ~ 1/(2x) * sum_k (2k-1)!! / (2x^2)^k
    inv = 1.0 / (2.0 * x * x)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 30):
        term = term * (2 * k - 1) * inv
        total = total + term
    return total / (2.0 * x)


def dawson(x):
    """Dawson integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.

    Taylor series near the origin, Rybicki's exponentially convergent
    sampling sum in the body and the asymptotic series for |x| >= 10.
    """
    xa = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xa).astype(float)
    out = np.empty_like(flat)
    ax = np.abs(flat)
    small = ax < _DAWSON_SERIES_MAX
    large = ax >= _DAWSON_ASYMPTOTIC_MIN
    mid = ~(small | large)
    if small.any():
        out[small] = _dawson_series(flat[small])
    if mid.any():
        out[mid] = _dawson_rybicki(flat[mid])
    if large.any():
        out[large] = _dawson_asymptotic(flat[large])
    return out.reshape(xa.shape) if xa.ndim else float(out[0])


def lambert_w0(x, max_iter: int = 20):
    """Principal branch W0(x) for x >= 0 (Halley iteration from log1p(x))."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0) or np.any(np.isnan(xa)):
        raise ValueError("lambert_w0 is only defined here for x >= 0")
    w = np.log1p(xa)
    big = xa > 3.0
    # log-based start is closer for large arguments
    if np.any(big):
        lx = np.log(np.where(big, xa, 3.0))
        w = np.where(big, lx - np.log(lx), w)
    for _ in range(max_iter):
        ew = np.exp(w)
        f = w * ew - xa
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = np.where(denom != 0, f / np.where(denom != 0, denom, 1.0), 0.0)
        w = w - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(np.abs(w), 1e-300)):
            break
    w = np.where(np.isinf(xa), np.inf, w)
    return w if xa.ndim else float(w)


def lambert_w0_exp(u):
    """W0(exp(u)) without forming exp(u); valid for any real u.

    For u > 20 solves w + log(w) = u by Newton iteration.
    """
    ua = np.asarray(u, dtype=float)
    flat = np.atleast_1d(ua)
    out = np.empty_like(flat)
    lo = flat <= 20.0
    if lo.any():
        out[lo] = lambert_w0(np.exp(flat[lo]))
    hi = ~lo
    if hi.any():
        uh = flat[hi]
        w = uh - np.log(uh)
        for _ in range(30):
            step = (w + np.log(w) - uh) * w / (w + 1.0)
            w = w - step
            if np.all(np.abs(step) <= 1e-16 * w):
                break
        out[hi] = w
    return out.reshape(ua.shape) if ua.ndim else float(out[0])


def gamma_upper_half(x):
    """Upper incomplete gamma Gamma(1/2, x) = sqrt(pi) * erfc(sqrt(x)), x >= 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise ValueError("gamma_upper_half requires x >= 0")
    out = _SQRT_PI * erfc(np.sqrt(xa))
    return out if xa.ndim else float(out)


def ierfc(x):
    """First repeated integral of erfc: int_x^inf erfc(u) du."""
    xa = np.asarray(x, dtype=float)
    out = np.exp(-xa * xa) / _SQRT_PI - xa * erfc(xa)
    return out if xa.ndim else float(out)


# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_P = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _log_sin_pi(z):
    # log(sin(pi z)) that survives large |Im z|
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    moderate = np.abs(z.imag) < 20.0
    if moderate.any():
        out[moderate] = np.log(np.sin(np.pi * z[moderate]))
    far = ~moderate
    if far.any():
        zf = z[far]
        # sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential
        up = zf.imag > 0
        lead = np.where(up, -1j * np.pi * zf, 1j * np.pi * zf)
        sub = np.where(up, np.exp(2j * np.pi * zf), np.exp(-2j * np.pi * zf))
        sign = np.where(up, -1.0, 1.0)
        out[far] = lead + np.log1p(-sub) - np.log(2j * sign)
    return out


def _log_gamma_right(z):
    z = z - 1.0
    a = np.full_like(z, _LANCZOS_P[0])
    for k in range(1, len(_LANCZOS_P)):
        a = a + _LANCZOS_P[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(a)


def log_gamma(z):
    """Complex log-gamma, exp(log_gamma(z)) == Gamma(z).

    Lanczos approximation for Re z >= 1/2 and the reflection formula
    otherwise.  The imaginary part is not unwrapped onto the principal
    branch of log Gamma; only exp() of the result is meaningful.
    """
    za = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(za).astype(complex)
    pole = (flat.imag == 0) & (flat.real <= 0) & (flat.real == np.round(flat.real))
    if pole.any():
        raise ValueError("log_gamma: pole at non-positive integer")
    out = np.empty_like(flat)
    right = flat.real >= 0.5
    if right.any():
        out[right] = _log_gamma_right(flat[right])
    left = ~right
    if left.any():
        zl = flat[left]
        out[left] = math.log(math.pi) - _log_sin_pi(zl) - _log_gamma_right(1.0 - zl)
    return out.reshape(za.shape) if za.ndim else complex(out[0])


def gamma_ratio_recurrence(z, n: int):
    """Gamma(z + k) / Gamma(z) for k = 0..n via the exact recurrence."""
    za = np.asarray(z, dtype=complex)
    out = np.empty((n + 1,) + za.shape, dtype=complex)
    out[0] = 1.0
    for k in range(1, n + 1):
        out[k] = out[k - 1] * (za + (k - 1))
    return out
