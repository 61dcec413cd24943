"""Spectral entropy S_w = (2 pi)^{-1/2} int S(t) exp(-i w t) dt.

Analytic transforms are used when a profile carries one; otherwise the
transform is computed by ``quadrature.fourier_integral``.  Profiles whose
entropy does not vanish at both ends need a regulator: either an
exponential damping exp(-eps|t|) or the energy-dependent damping
exp(-eps|w||t|).  ``regularized_limit`` removes the regulator from a family
of values computed at decreasing eps.
"""

from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DivergenceError, RegularizationRequired
from .profiles import EntropyProfile
from .quadrature import fourier_integral

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_EPS",
    "RegularizationScheme",
    "SpectralEntropy",
    "LimitResult",
    "transform",
    "transform_with_error",
    "transform_regularized",
    "regularized_limit",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
DEFAULT_TOL = 1e-8
ABS_FLOOR = 1e-14
#: eps sequence used to remove a regulator, in units of kappa
DEFAULT_EPS = (1e-1, 3e-2, 1e-2, 3e-3, 1e-3)

_KINDS = {"exp": "exponential_time", "exponential_time": "exponential_time",
          "energy": "energy_dependent", "energy_dependent": "energy_dependent"}


@dataclass(frozen=True)
class RegularizationScheme:
    """Damping exp(-eps|t|) ("exponential_time") or exp(-eps|w||t|) ("energy_dependent")."""

    kind: str
    eps: float

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown regularization '{self.kind}'")
        object.__setattr__(self, "kind", _KINDS[self.kind])
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise ValueError("regularization eps must be positive")

    def rate(self, omega: float) -> float:
        """Decay rate of the damping factor at frequency ``omega``."""
        if self.kind == "exponential_time":
            return self.eps
        return self.eps * abs(omega)


def _limits(p: EntropyProfile):
    # a support end only truncates the integral where S vanishes beyond it
    if p.support is None:
        return -math.inf, math.inf
    a, b = p.support
    lo, hi = p.asymptotics
    return (a if lo == 0 else -math.inf), (b if hi == 0 else math.inf)


def _numeric(p: EntropyProfile, omega: float, tol: float, damping: float = 0.0):
    a, b = _limits(p)
    if damping > 0:
        f = lambda t: p.s_of_t(t) * np.exp(-damping * np.abs(t))
        scale = min(p.time_scale, 1.0 / damping) if p.integrable else 1.0 / damping
    else:
        f = p.s_of_t
        scale = p.time_scale
    r = fourier_integral(f, omega, a, b, rtol=tol / 4, atol=ABS_FLOOR * SQRT_2PI / 4,
                         points=p.breakpoints, scale=scale)
    value = complex(r.value) / SQRT_2PI
    err = r.error / SQRT_2PI
    if not r.converged or err > tol * abs(value) + ABS_FLOOR:
        raise ConvergenceError(
            f"transform of '{p.name}' at w={omega:g} did not converge "
            f"(error estimate {err:.3e})", value=value, estimate=err)
    return value, err


def transform_with_error(p: EntropyProfile, omega: float, tol: float = DEFAULT_TOL,
                         force_numeric: bool = False):
    """(S_w, error estimate, provenance) for a single frequency."""
    omega = float(omega)
    if not math.isfinite(omega):
        raise ValueError("frequency must be finite")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if p.analytic_fourier is not None and not force_numeric and (p.integrable or omega != 0):
        try:
            return complex(p.analytic_fourier(np.array([omega]))[0]), 0.0, "analytic"
        except ZeroDivisionError:
            pass
    if not p.integrable:
        raise RegularizationRequired(
            f"'{p.name}' does not vanish at both ends (asymptotics {p.asymptotics}); "
            "use transform_regularized")
    value, err = _numeric(p, omega, tol)
    return value, err, "numeric"


def transform(p: EntropyProfile, omega: float, tol: float = DEFAULT_TOL,
              force_numeric: bool = False) -> complex:
    """S_w for a single frequency; see ``transform_with_error``."""
    return transform_with_error(p, omega, tol, force_numeric)[0]


def transform_regularized(p: EntropyProfile, omega: float, scheme: RegularizationScheme,
                          tol: float = DEFAULT_TOL, force_numeric: bool = False) -> complex:
    """Transform of S(t) times the damping factor of ``scheme``."""
    omega = float(omega)
    if p.regularized_fourier is not None and not force_numeric:
        return complex(p.regularized_fourier(np.array([omega]), scheme.kind, scheme.eps)[0])
    rate = scheme.rate(omega)
    if rate == 0:
        return transform(p, omega, tol, force_numeric)
    return _numeric(p, omega, tol, damping=rate)[0]


class SpectralEntropy:
    """S_w as a function of frequency, with a thread-safe memo cache.

    ``provenance`` is "analytic", "numeric" or "regularized(kind, eps)".
    ``eval`` accepts scalars or arrays; repeated frequencies are served from
    the cache and are bit-identical.
    """

    def __init__(self, profile: EntropyProfile, tol: float = DEFAULT_TOL,
                 force_numeric: bool = False, scheme: RegularizationScheme | None = None,
                 workers: int = 1):
        self.profile = profile
        self.tol = tol
        self.force_numeric = force_numeric
        self.scheme = scheme
        self.workers = workers
        self._cache: dict[float, complex] = {}
        self._errors: dict[float, float] = {}
        self._lock = threading.Lock()
        if scheme is not None:
            self.provenance = f"regularized({scheme.kind}, {scheme.eps:g})"
            self._vector = (profile.regularized_fourier is not None and not force_numeric)
        else:
            analytic = profile.analytic_fourier is not None and not force_numeric
            self.provenance = "analytic" if analytic else "numeric"
            self._vector = analytic
        if scheme is None and not self._vector and not profile.integrable:
            raise RegularizationRequired(
                f"'{profile.name}' needs a regularization scheme for its transform")

    def _one(self, omega: float):
        if self.scheme is not None:
            return transform_regularized(self.profile, omega, self.scheme, self.tol,
                                         self.force_numeric), 0.0
        value, err, _ = transform_with_error(self.profile, omega, self.tol, self.force_numeric)
        return value, err

    def _compute(self, missing):
        if self._vector:
            w = np.array(missing)
            if self.scheme is not None:
                vals = self.profile.regularized_fourier(w, self.scheme.kind, self.scheme.eps)
            else:
                vals = self.profile.analytic_fourier(w)
            return [(complex(v), 0.0) for v in np.broadcast_to(vals, w.shape)]
        if self.workers > 1 and len(missing) > 1:
            with ThreadPoolExecutor(self.workers) as pool:
                return list(pool.map(self._one, missing))
        return [self._one(w) for w in missing]

    def eval(self, omega):
        w = np.asarray(omega, dtype=float)
        flat = w.ravel()
        with self._lock:
            missing = sorted({float(x) for x in flat if float(x) not in self._cache})
        if missing:
            results = self._compute(missing)
            with self._lock:
                for x, (v, e) in zip(missing, results):
                    # setdefault keeps the first insert so repeated reads stay identical
                    self._cache.setdefault(x, v)
                    self._errors.setdefault(x, e)
        with self._lock:
            out = np.array([self._cache[float(x)] for x in flat], dtype=complex)
        return out.reshape(w.shape) if w.ndim else complex(out[0])

    __call__ = eval

    def error(self, omega) -> float:
        """Largest cached quadrature error estimate over ``omega``."""
        w = np.atleast_1d(np.asarray(omega, dtype=float))
        self.eval(w)
        with self._lock:
            return max(self._errors[float(x)] for x in w)

    def power(self, omega):
        """|S_w|^2."""
        v = self.eval(omega)
        return np.abs(v) ** 2

    def __len__(self):
        return len(self._cache)


@dataclass
class LimitResult:
    """Outcome of removing a regulator.  ``divergence`` is None, "log" or "power"."""

    value: float
    error: float
    divergence: str | None = None
    eps: tuple = ()
    values: tuple = ()
    notes: list = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.divergence is None

    def require(self, quantity: str = "regularized quantity"):
        if self.divergence is not None:
            raise DivergenceError(
                f"{quantity} diverges as eps -> 0 ({self.divergence})",
                quantity=quantity, divergence=self.divergence, region="IR")
        return self.value


def _neville_at_zero(x, y):
    """Value at x = 0 of the interpolating polynomial through (x, y)."""
    p = list(y)
    n = len(x)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (x[i + k] * p[i] - x[i] * p[i + 1]) / (x[i + k] - x[i])
    return p[0]


def regularized_limit(values, eps=DEFAULT_EPS, *, discard_zero_support: bool = True,
                      abs_tol: float = 1e-10, power: int = 2) -> LimitResult:
    """Extrapolate a family f(eps) to eps = 0.

    ``values[k]`` is the quantity at ``eps[k]`` (eps decreasing).  The limit
    is the Richardson extrapolation, polynomial in eps**power, through the
    three smallest eps; the error estimate compares it with the two-point
    value.  Both regulators enter the catalog transforms through eps**2,
    hence the default power.  A family whose increments do not shrink is
    reported as divergent: "log" when the increments stay roughly constant
    along the geometric eps sequence, "power" when they grow.  With
    ``discard_zero_support`` a limit below ``abs_tol``, or below its own
    error estimate, is reported as exactly zero (the O(eps^2) pieces that collapse onto p = 0).
    """
    eps = tuple(float(e) for e in eps)
    vals = tuple(float(v) for v in values)
    if len(eps) != len(vals) or len(eps) < 3:
        raise ValueError("need at least three (eps, value) pairs")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("eps must be strictly decreasing")
    if not all(math.isfinite(v) for v in vals):
        return LimitResult(math.inf, math.inf, "power", eps, vals, ["non-finite member"])
    inc = np.abs(np.diff(vals))
    scale = max(abs(v) for v in vals)
    significant = inc[-1] > abs_tol + 1e-9 * scale
    if significant and inc[-1] > 0.3 * inc[0]:
        kind = "log" if inc[-1] < 2.0 * inc[0] else "power"
        return LimitResult(math.inf if vals[-1] > 0 else -math.inf, math.inf, kind, eps, vals,
                           [f"increments {inc[0]:.3e} -> {inc[-1]:.3e} do not shrink"])
    x = tuple(e ** power for e in eps[-3:])
    y = vals[-3:]
    value = _neville_at_zero(x, y)
    err = abs(value - _neville_at_zero(x[-2:], y[-2:]))
    notes = []
    if discard_zero_support and (abs(value) < abs_tol or abs(value) <= err):
        notes.append(f"|limit| {abs(value):.3e} below max({abs_tol:g}, error {err:.1e}): reported as 0")
        value, err = 0.0, max(err, abs(value))
    return LimitResult(value, err, None, eps, vals, notes)
