"""Non-relativistic series for the right-side beta coefficient of the beta-decay mirror.

The trajectory z(t) = (s/kappa) W(exp(kappa t)) has an exactly known
coefficient

    beta = -(exp(-w pi/2) s / pi) sqrt(pq) (w - s w_-)^(i w - 1) Gamma(-i w),

with w = p + q and w_- = p - q.  The series in powers of z(t),

    beta = sqrt(2pq/pi) sum_{n>=1} i^n w_-^(n-1) / n! * F[z^n](w),

reproduces its expansion in s term by term once the closed-form transforms
F[z^n] are inserted.  Inside this module frequencies are measured in units
of kappa; the public functions take physical p, q and convert at the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quadrature import integrate
from .specfun import gamma_ratio_recurrence, log_gamma

__all__ = [
    "MAX_ORDER",
    "BetaCoefficient",
    "ResidualFit",
    "beta_exact",
    "beta_exact_modulus_sq",
    "beta_series",
    "series_terms",
    "fourier_power_closed",
    "fourier_power_quadrature",
    "series_residual_scaling",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
#: largest order accepted by beta_series (Gamma(n - i w) stays well inside double range)
MAX_ORDER = 50


@dataclass(frozen=True)
class BetaCoefficient:
    """A right-side beta coefficient at (p, q).  ``order`` is an int or "exact"."""

    value: complex
    p: float
    q: float
    order: int | str

    @property
    def modulus_sq(self) -> float:
        return abs(self.value) ** 2


def _check_pq(p, q, s):
    p, q, s = float(p), float(q), float(s)
    if not (p > 0 and q > 0):
        raise ValueError("frequencies p and q must be positive")
    if not 0 <= s < 1:
        raise ValueError("speed s must lie in [0, 1)")
    return p, q, s


def _exact_units(p, q, s):
    w, wm = p + q, p - q
    # Gamma(-i w) = Gamma(1 - i w) / (-i w)
    lg = complex(log_gamma(1 - 1j * w)) - math.log(w) + 0.5j * math.pi
    logv = -0.5 * math.pi * w + (1j * w - 1) * math.log(w - s * wm) + lg
    return -(s / math.pi) * math.sqrt(p * q) * np.exp(logv)


def beta_exact(p, q, s, kappa: float = 1.0) -> BetaCoefficient:
    """Exact coefficient at physical frequencies p, q (speed s, rate kappa)."""
    p, q, s = _check_pq(p, q, s)
    v = _exact_units(p / kappa, q / kappa, s) / kappa
    return BetaCoefficient(complex(v), p, q, "exact")


def beta_exact_modulus_sq(p, q, s, kappa: float = 1.0) -> float:
    """|beta|^2 from |Gamma(-i w)|^2 = pi / (w sinh(pi w)), in closed form."""
    p, q, s = _check_pq(p, q, s)
    pu, qu = p / kappa, q / kappa
    w, wm = pu + qu, pu - qu
    return 2 * s * s * pu * qu / (math.pi * w * (w - s * wm) ** 2 * math.expm1(2 * math.pi * w)) / kappa ** 2


def series_terms(p, q, s, order: int, kappa: float = 1.0) -> np.ndarray:
    """Terms n = 0..order of the expansion; term n is proportional to s^(n+1)."""
    p, q, s = _check_pq(p, q, s)
    order = int(order)
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"order must lie in [0, {MAX_ORDER}]")
    pu, qu = p / kappa, q / kappa
    w, wm = pu + qu, pu - qu
    base = np.exp(-0.5 * math.pi * w + (1j * w - 2) * math.log(w) + complex(log_gamma(1 - 1j * w)))
    ratios = gamma_ratio_recurrence(1 - 1j * w, order)  # Gamma(n + 1 - i w) / Gamma(1 - i w)
    out = np.empty(order + 1, dtype=complex)
    coef = 1.0
    for n in range(order + 1):
        if n:
            coef *= s * wm / (n * w)
        out[n] = coef * ratios[n]
    return -(math.sqrt(pu * qu) / math.pi) * 1j * s * base * out / kappa


def beta_series(p, q, s, order: int, kappa: float = 1.0) -> BetaCoefficient:
    """Partial sum through s^(order+1); the residual is O(s^(order+2))."""
    order = int(order)
    if order < 1:
        raise ValueError("order must be >= 1")
    terms = series_terms(p, q, s, order, kappa)
    return BetaCoefficient(complex(terms.sum()), float(p), float(q), order)


def fourier_power_closed(n: int, omega, s) -> complex:
    """Closed form of F[z^n](w) = (2 pi)^-1/2 int (s W(e^t))^n e^{-i w t} dt, kappa = 1."""
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    w = float(omega)
    if not w > 0:
        raise ValueError("omega must be positive")
    lg = complex(log_gamma(1 - 1j * w))
    g = np.exp(lg) * gamma_ratio_recurrence(1 - 1j * w, n - 1)[n - 1]  # Gamma(n - i w)
    return complex(n * (-1j) * (-1j * s) ** n / SQRT_2PI * np.exp(-0.5 * math.pi * w)
                   * np.exp((1j * w - n - 1) * math.log(w)) * g)


def fourier_power_quadrature(n: int, omega, s, rtol: float = 1e-10) -> complex:
    """F[z^n](w) by quadrature, independent of the Gamma-function closed form.

    With W = W(e^t) the integral becomes int_0^inf s^n (W^n + W^(n-1)) W^(-i w)
    e^(-i w W) dW; rotating to W = -i x makes it absolutely convergent, and
    x = e^u spreads the endpoint behaviour over the real line.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be >= 1")
    w = float(omega)
    if not w > 0:
        raise ValueError("omega must be positive")

    def f(u):
        x = np.exp(u)
        body = (-1j * x) ** n + (-1j * x) ** (n - 1)
        return body * np.exp(-1j * w * u - w * x) * x

    hi = math.log(80.0 / w)
    lo = -40.0 / n
    r = integrate(f, lo, hi, rtol=rtol, points=(-math.log(w),))
    pref = s ** n * (-1j) * math.exp(-0.5 * math.pi * w) / SQRT_2PI
    return complex(pref * r.require("F[z^n] quadrature"))


@dataclass
class ResidualFit:
    """Slope of log|beta_exact - beta_series(m)| against log s."""

    order: int
    slope: float
    expected: int
    s_values: tuple
    residuals: tuple
    notes: list = field(default_factory=list)

    @property
    def relative_deviation(self) -> float:
        return abs(self.slope - self.expected) / self.expected

    def to_dict(self):
        return {"order": self.order, "slope": self.slope, "expected": self.expected,
                "s_values": list(self.s_values), "residuals": list(self.residuals),
                "notes": list(self.notes)}


def series_residual_scaling(p, q, orders=(1, 2, 3), s_values=(0.02, 0.05, 0.1),
                            kappa: float = 1.0) -> list[ResidualFit]:
    """Fit the residual exponent for each order; it should be order + 2."""
    s_values = tuple(float(s) for s in s_values)
    if any(not 0 < s <= 0.3 for s in s_values) or len(s_values) < 2:
        raise ValueError("need at least two s values in (0, 0.3]")
    fits = []
    for m in orders:
        res = tuple(abs(beta_exact(p, q, s, kappa).value - beta_series(p, q, s, m, kappa).value)
                    for s in s_values)
        notes = []
        scale = max(abs(beta_exact(p, q, s, kappa).value) for s in s_values)
        if max(res) <= 1e-14 * scale:
            # p = q: w_- = 0 removes every term beyond the first
            slope = math.nan
            notes.append("residual at roundoff level; series is exact at this (p, q)")
        else:
            slope = float(np.polyfit(np.log(s_values), np.log(res), 1)[0])
        fits.append(ResidualFit(int(m), slope, int(m) + 2, s_values, res, notes))
    return fits
