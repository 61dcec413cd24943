"""Entropy profiles S(t), the mirror trajectories dual to them, and the catalog.

In the non-relativistic regime the entanglement entropy is minus one sixth
of the mirror velocity, S = -v/6, so the trajectory is z = -6 * int S dt.

Every callable on a profile is vectorised: it takes a float array of times
(or frequencies) and returns an array of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erfc

from .errors import ProfileError
from .quadrature import integrate
from .specfun import gamma_upper_half, ierfc, lambert_w0_exp, log_gamma, dawson

__all__ = [
    "EntropyProfile",
    "TrajectoryProfile",
    "ValidationReport",
    "CATALOG",
    "make_profile",
    "tabulated_profile",
    "trajectory_from_entropy",
    "validate_profile",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)

#: Entropy bound for time-like worldlines in the small-velocity regime.
S_BOUND = 1.0 / 6.0


@dataclass(frozen=True, eq=False)
class EntropyProfile:
    """A time-dependent entanglement entropy with the metadata the pipeline needs.

    ``asymptotics`` holds (S(-inf), S(+inf)) and may contain infinities for
    unbounded profiles.  ``support`` is the interval outside which S equals
    its asymptotic value; either end may be infinite.  ``kinks`` are points
    where S is continuous but S' is not.  ``analytic_fourier`` is the closed
    form of S_w when one exists; ``regularized_fourier(w, kind, eps)`` is
    the closed form of a regularized transform (only for profiles whose
    plain transform does not exist).
    """

    name: str
    params: Mapping[str, float]
    s_of_t: Callable
    ds_dt: Callable | None = None
    d2s_dt2: Callable | None = None
    asymptotics: tuple = (0.0, 0.0)
    jumps: tuple = ()
    kinks: tuple = ()
    support: tuple | None = None
    analytic_fourier: Callable | None = None
    regularized_fourier: Callable | None = None
    time_scale: float = 1.0
    amplitude_param: str | None = None
    charge: float = 1.0
    exact_s_of_t: Callable | None = None
    z_of_t: Callable | None = None
    notes: tuple = ()

    def __call__(self, t):
        return self.s_of_t(t)

    @property
    def kappa(self) -> float:
        return float(self.params.get("kappa", 1.0))

    @property
    def delta_s(self) -> float:
        """Purity defect S(+inf) - S(-inf); nan when either end is unbounded."""
        lo, hi = self.asymptotics
        if not (math.isfinite(lo) and math.isfinite(hi)):
            return math.nan
        return hi - lo

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(a) for a in self.asymptotics)

    @property
    def integrable(self) -> bool:
        """True when S is absolutely integrable, so S_w exists as a function."""
        return self.asymptotics[0] == 0.0 and self.asymptotics[1] == 0.0

    @property
    def breakpoints(self) -> tuple:
        pts = set(self.jumps) | set(self.kinks)
        if self.support is not None:
            pts |= {x for x in self.support if math.isfinite(x)}
        return tuple(sorted(pts))

    def scaled(self, c: float) -> "EntropyProfile":
        """Profile c*S(t).  Exact: every attached closed form is multiplied by c."""
        c = float(c)

        def mul(fn):
            return None if fn is None else (lambda *a: c * fn(*a))

        params = dict(self.params)
        if self.amplitude_param is not None:
            params[self.amplitude_param] = c * params[self.amplitude_param]
        lo, hi = self.asymptotics
        return replace(
            self, params=params, s_of_t=mul(self.s_of_t), ds_dt=mul(self.ds_dt),
            d2s_dt2=mul(self.d2s_dt2), asymptotics=(c * lo, c * hi),
            analytic_fourier=mul(self.analytic_fourier),
            regularized_fourier=mul(self.regularized_fourier),
            exact_s_of_t=None, z_of_t=mul(self.z_of_t))

    def rescaled(self, lam: float) -> "EntropyProfile":
        """Profile S(lam*t), lam > 0.  Transforms follow S_w -> S_{w/lam}/lam."""
        lam = float(lam)
        if not lam > 0:
            raise ProfileError("time rescaling factor must be positive")

        def sub(fn, power=0):
            if fn is None:
                return None
            return lambda t: lam ** power * fn(lam * np.asarray(t, dtype=float))

        def ft(fn):
            if fn is None:
                return None
            return lambda w: fn(np.asarray(w, dtype=float) / lam) / lam

        support = None if self.support is None else tuple(x / lam for x in self.support)
        z = None if self.z_of_t is None else (lambda t: self.z_of_t(lam * np.asarray(t)) / lam)
        return replace(
            self, name=f"{self.name}@t*{lam:g}", params=dict(self.params, time_rescale=lam),
            s_of_t=sub(self.s_of_t), ds_dt=sub(self.ds_dt, 1), d2s_dt2=sub(self.d2s_dt2, 2),
            jumps=tuple(x / lam for x in self.jumps), kinks=tuple(x / lam for x in self.kinks),
            support=support, analytic_fourier=ft(self.analytic_fourier),
            regularized_fourier=None, time_scale=self.time_scale / lam,
            exact_s_of_t=None, z_of_t=z)


@dataclass(frozen=True, eq=False)
class TrajectoryProfile:
    """Mirror trajectory z(t) with velocity v = dz/dt = -6 S(t)."""

    z_of_t: Callable
    v_of_t: Callable
    params: Mapping[str, float]
    source: str = ""
    a_of_t: Callable | None = None

    def entropy(self, t):
        """Recover S(t) = -v(t)/6."""
        return -np.asarray(self.v_of_t(t)) / 6.0


@dataclass
class ValidationReport:
    profile: str
    sup_abs_s: float
    non_relativistic: bool
    asymptotic_rest: bool
    page_curve: bool
    purity_defect: float
    asymptotics_consistent: bool
    jumps_confirmed: bool
    jump_sizes: dict = field(default_factory=dict)
    grid: tuple = ()
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["jump_sizes"] = {repr(k): v for k, v in self.jump_sizes.items()}
        return d


# ---------------------------------------------------------------------------
# parameter handling


def _param(params, key, default=None, *, positive=False):
    if key in params:
        val = params[key]
    elif default is not None:
        val = default
    else:
        raise ProfileError(f"missing required parameter '{key}'")
    try:
        val = float(val)
    except (TypeError, ValueError):
        raise ProfileError(f"parameter '{key}' must be a real number") from None
    if not math.isfinite(val):
        raise ProfileError(f"parameter '{key}' must be finite")
    if positive and not val > 0:
        raise ProfileError(f"parameter '{key}' must be positive")
    return val


def _integer(params, key):
    val = _param(params, key, positive=True)
    if val != round(val):
        raise ProfileError(f"parameter '{key}' must be an integer")
    if val < 1:
        raise ProfileError(f"parameter '{key}' must be >= 1")
    return int(round(val))


def _arr(t):
    return np.asarray(t, dtype=float)


def _check_unknown(params, allowed):
    extra = set(params) - set(allowed)
    if extra:
        raise ProfileError(f"unknown parameter(s): {', '.join(sorted(extra))}")


# ---------------------------------------------------------------------------
# null and divergent profiles


def _static(params):
    _check_unknown(params, {"kappa"})
    kappa = _param(params, "kappa", 1.0, positive=True)
    zero = lambda t: np.zeros_like(_arr(t))
    return EntropyProfile(
        name="static", params={"kappa": kappa}, s_of_t=zero, ds_dt=zero, d2s_dt2=zero,
        analytic_fourier=lambda w: np.zeros_like(_arr(w), dtype=complex),
        regularized_fourier=lambda w, kind, eps: np.zeros_like(_arr(w), dtype=complex),
        time_scale=1.0 / kappa, z_of_t=zero)


def _constant(params):
    _check_unknown(params, {"S0", "kappa"})
    s0 = _param(params, "S0")
    kappa = _param(params, "kappa", 1.0, positive=True)

    def reg(w, kind, eps):
        w = _arr(w)
        if kind == "exponential_time":
            return s0 * math.sqrt(2 / math.pi) * eps / (eps ** 2 + w ** 2) + 0j
        return s0 * math.sqrt(2 / math.pi) * eps / (np.abs(w) * (1 + eps ** 2)) + 0j

    zero = lambda t: np.zeros_like(_arr(t))
    return EntropyProfile(
        name="constant", params={"S0": s0, "kappa": kappa},
        s_of_t=lambda t: np.full_like(_arr(t), s0), ds_dt=zero, d2s_dt2=zero,
        asymptotics=(s0, s0), regularized_fourier=reg, time_scale=1.0 / kappa,
        amplitude_param="S0", z_of_t=lambda t: -6.0 * s0 * _arr(t))


def _eternal_slope(params):
    if "S0" in params:
        return _param(params, "S0")
    if "kappa" in params:
        # z'' = -6 S' = kappa
        return -_param(params, "kappa", positive=True) / 6.0
    raise ProfileError("missing required parameter 'S0' (or 'kappa' for S0 = -kappa/6)")


def _uniform_eternal(params):
    _check_unknown(params, {"S0", "kappa"})
    s0 = _eternal_slope(params)
    kappa = _param(params, "kappa", 1.0, positive=True)
    c = math.sqrt(2 / math.pi)

    def reg(w, kind, eps):
        w = _arr(w)
        if kind == "exponential_time":
            return -1j * s0 * c * 2 * eps * w / (eps ** 2 + w ** 2) ** 2
        return -1j * s0 * c * 2 * eps * np.sign(w) / (w ** 2 * (1 + eps ** 2) ** 2)

    sign = math.copysign(1.0, s0) if s0 else 0.0
    return EntropyProfile(
        name="uniform_eternal", params={"S0": s0, "kappa": kappa},
        s_of_t=lambda t: s0 * _arr(t), ds_dt=lambda t: np.full_like(_arr(t), s0),
        d2s_dt2=lambda t: np.zeros_like(_arr(t)),
        asymptotics=(-sign * math.inf, sign * math.inf), regularized_fourier=reg,
        time_scale=1.0 / kappa, amplitude_param="S0",
        z_of_t=lambda t: -3.0 * s0 * _arr(t) ** 2)


def _uniform_semi_eternal(params):
    _check_unknown(params, {"S0", "kappa"})
    s0 = _eternal_slope(params)
    kappa = _param(params, "kappa", 1.0, positive=True)

    def reg(w, kind, eps):
        w = _arr(w)
        if kind == "exponential_time":
            return s0 / (SQRT_2PI * (eps + 1j * w) ** 2)
        return s0 / (SQRT_2PI * w ** 2 * (eps * np.sign(w) + 1j) ** 2)

    sign = math.copysign(1.0, s0) if s0 else 0.0
    return EntropyProfile(
        name="uniform_semi_eternal", params={"S0": s0, "kappa": kappa},
        s_of_t=lambda t: s0 * np.maximum(_arr(t), 0.0),
        ds_dt=lambda t: np.where(_arr(t) > 0, s0, 0.0),
        d2s_dt2=lambda t: np.zeros_like(_arr(t)),
        asymptotics=(0.0, sign * math.inf), kinks=(0.0,), support=(0.0, math.inf),
        regularized_fourier=reg, time_scale=1.0 / kappa, amplitude_param="S0",
        z_of_t=lambda t: -3.0 * s0 * np.maximum(_arr(t), 0.0) ** 2)


# ---------------------------------------------------------------------------
# radiating profiles


def _lorentzian(params):
    _check_unknown(params, {"S_max", "kappa"})
    smax = _param(params, "S_max")
    kappa = _param(params, "kappa", 1.0, positive=True)
    amp = -16.0 * smax / (3.0 * math.sqrt(3.0))

    def s(t):
        u = kappa * _arr(t)
        return amp * u / (u * u + 1.0) ** 2

    def ds(t):
        u = kappa * _arr(t)
        return amp * kappa * (1.0 - 3.0 * u * u) / (u * u + 1.0) ** 3

    def d2s(t):
        u = kappa * _arr(t)
        return -12.0 * amp * kappa ** 2 * u * (1.0 - u * u) / (u * u + 1.0) ** 4

    def fourier(w):
        x = _arr(w) / kappa
        return amp / (kappa * SQRT_2PI) * (-0.5j * math.pi) * x * np.exp(-np.abs(x))

    def z(t):
        u = kappa * _arr(t)
        return 3.0 * amp / (kappa * (u * u + 1.0))

    return EntropyProfile(
        name="lorentzian", params={"S_max": smax, "kappa": kappa}, s_of_t=s, ds_dt=ds,
        d2s_dt2=d2s, analytic_fourier=fourier, time_scale=1.0 / kappa,
        amplitude_param="S_max", z_of_t=z)


def _black_hole_analog(params):
    _check_unknown(params, {"M"})
    m = _param(params, "M", positive=True)
    tstar = 96.0 * SQRT_2PI * m ** 3
    amp = 2.0 * SQRT_2PI * m * m
    x_scale = 48.0 * SQRT_2PI * m ** 3

    def s(t):
        return amp * SQRT_PI * erfc(np.abs(_arr(t)) / tstar)

    def ds(t):
        t = _arr(t)
        return -2.0 * amp * np.sign(t) * np.exp(-(t / tstar) ** 2) / tstar

    def d2s(t):
        t = _arr(t)
        return 4.0 * amp * np.abs(t) / tstar ** 3 * np.exp(-(t / tstar) ** 2)

    def fourier(w):
        x = x_scale * _arr(w)
        small = np.abs(x) < 1e-6
        safe = np.where(small, 1.0, x)
        ratio = np.where(small, 1.0 - 2.0 * x * x / 3.0, dawson(safe) / safe)
        return 8.0 * m * m * x_scale * ratio + 0j

    def exact(t):
        return np.arcsinh(6.0 * amp * gamma_upper_half((_arr(t) / tstar) ** 2)) / 6.0

    def z(t):
        t = _arr(t)
        neg = t <= 0
        g = np.where(neg, tstar * ierfc(-np.minimum(t, 0.0) / tstar),
                     tstar * (2.0 / SQRT_PI - ierfc(np.maximum(t, 0.0) / tstar)))
        return -6.0 * amp * SQRT_PI * g

    return EntropyProfile(
        name="black_hole_analog", params={"M": m}, s_of_t=s, ds_dt=ds, d2s_dt2=d2s,
        kinks=(0.0,), analytic_fourier=fourier, time_scale=tstar, exact_s_of_t=exact,
        z_of_t=z, notes=(f"t_star = {tstar:.12g}",))


def _beta_decay(params):
    _check_unknown(params, {"s", "kappa", "e"})
    sp = _param(params, "s")
    kappa = _param(params, "kappa", 1.0, positive=True)
    e = _param(params, "e", 1.0)

    def w_of(t):
        return lambert_w0_exp(kappa * _arr(t))

    def s(t):
        w = w_of(t)
        return -(sp / 6.0) * w / (1.0 + w)

    def ds(t):
        w = w_of(t)
        return -(sp * kappa / 6.0) * w / (1.0 + w) ** 3

    def d2s(t):
        w = w_of(t)
        return -(sp * kappa ** 2 / 6.0) * w * (1.0 - 2.0 * w) / (1.0 + w) ** 5

    def fourier(w):
        w = _arr(w)
        nu = np.abs(w) / kappa
        if np.any(nu == 0):
            raise ZeroDivisionError("beta_decay transform is singular at w = 0")
        lg = log_gamma(1.0 - 1j * nu)
        val = (1j * sp / (6.0 * kappa * SQRT_2PI)) * np.exp(
            -0.5 * math.pi * nu + (1j * nu - 1.0) * np.log(nu) + lg)
        return np.where(w < 0, np.conj(val), val)

    return EntropyProfile(
        name="beta_decay", params={"s": sp, "kappa": kappa, "e": e}, s_of_t=s, ds_dt=ds,
        d2s_dt2=d2s, asymptotics=(0.0, -sp / 6.0), analytic_fourier=fourier,
        time_scale=1.0 / kappa, amplitude_param="s", charge=e,
        z_of_t=lambda t: (sp / kappa) * w_of(t))


def _harmonic_window(params, allowed):
    _check_unknown(params, allowed)
    sp = _param(params, "s")
    kappa = _param(params, "kappa", 1.0, positive=True)
    n = _integer(params, "n")
    return sp, kappa, n, math.pi * n / kappa


def _harmonic_finite(params):
    sp, kappa, n, half = _harmonic_window(params, {"s", "kappa", "n"})
    inside = lambda t: np.abs(t) <= half
    sign_n = (-1.0) ** n

    def s(t):
        t = _arr(t)
        return np.where(inside(t), sp * np.sin(kappa * t), 0.0)

    def ds(t):
        t = _arr(t)
        return np.where(inside(t), sp * kappa * np.cos(kappa * t), 0.0)

    def d2s(t):
        t = _arr(t)
        return np.where(inside(t), -sp * kappa ** 2 * np.sin(kappa * t), 0.0)

    def right(w):
        # sin(pi n w / k) = (-1)^n sin(pi n d / k) with d = w - k; sinc keeps w = k exact
        d = w - kappa
        return -1j * math.sqrt(2.0 / math.pi) * sp * math.pi * n * np.sinc(n * d / kappa) / (2.0 * kappa + d)

    def fourier(w):
        w = _arr(w)
        return np.where(w < 0, -1.0, 1.0) * right(np.abs(w))

    def z(t):
        t = _arr(t)
        return np.where(inside(t), 6.0 * sp / kappa * np.cos(kappa * t), 6.0 * sp / kappa * sign_n)

    return EntropyProfile(
        name="harmonic_finite", params={"s": sp, "kappa": kappa, "n": n}, s_of_t=s, ds_dt=ds,
        d2s_dt2=d2s, kinks=(-half, half), support=(-half, half), analytic_fourier=fourier,
        time_scale=1.0 / kappa, amplitude_param="s", z_of_t=z)


def _harmonic_damped(params):
    _check_unknown(params, {"s", "kappa", "n"})
    sp = _param(params, "s")
    kappa = _param(params, "kappa", 1.0, positive=True)
    n = _integer(params, "n")
    a = kappa / (4.0 * math.pi * n)
    pos = lambda t: t > 0

    def s(t):
        t = _arr(t)
        tp = np.maximum(t, 0.0)
        return np.where(pos(t), sp * np.exp(-a * tp) * np.sin(kappa * tp), 0.0)

    def ds(t):
        t = _arr(t)
        tp = np.maximum(t, 0.0)
        val = sp * np.exp(-a * tp) * (kappa * np.cos(kappa * tp) - a * np.sin(kappa * tp))
        return np.where(pos(t), val, 0.0)

    def d2s(t):
        t = _arr(t)
        tp = np.maximum(t, 0.0)
        val = sp * np.exp(-a * tp) * (-2 * a * kappa * np.cos(kappa * tp)
                                      + (a * a - kappa ** 2) * np.sin(kappa * tp))
        return np.where(pos(t), val, 0.0)

    def fourier(w):
        w = _arr(w)
        return sp * kappa / (SQRT_2PI * ((a + 1j * w) ** 2 + kappa ** 2))

    def z(t):
        t = _arr(t)
        tp = np.maximum(t, 0.0)
        val = -6.0 * sp * (kappa - np.exp(-a * tp) * (a * np.sin(kappa * tp) + kappa * np.cos(kappa * tp)))
        return np.where(pos(t), val / (a * a + kappa ** 2), 0.0)

    return EntropyProfile(
        name="harmonic_damped", params={"s": sp, "kappa": kappa, "n": n}, s_of_t=s,
        ds_dt=ds, d2s_dt2=d2s, kinks=(0.0,), support=(0.0, math.inf),
        analytic_fourier=fourier, time_scale=1.0 / a, amplitude_param="s", z_of_t=z,
        notes=(f"damping rate a = kappa/(4 pi n) = {a:.12g}",))


def _harmonic_discontinuous(params):
    sp, kappa, n, half = _harmonic_window(params, {"s", "kappa", "n"})
    inside = lambda t: np.abs(t) <= half

    def s(t):
        t = _arr(t)
        return np.where(inside(t), sp * np.cos(kappa * t), 0.0)

    def ds(t):
        t = _arr(t)
        return np.where(inside(t), -sp * kappa * np.sin(kappa * t), 0.0)

    def d2s(t):
        t = _arr(t)
        return np.where(inside(t), -sp * kappa ** 2 * np.cos(kappa * t), 0.0)

    def fourier(w):
        w = np.abs(_arr(w))
        d = w - kappa
        val = sp / SQRT_2PI * 2.0 * w * (math.pi * n / kappa) * np.sinc(n * d / kappa) / (w + kappa)
        return val + 0j

    def z(t):
        t = _arr(t)
        return np.where(inside(t), -6.0 * sp / kappa * np.sin(kappa * t), 0.0)

    return EntropyProfile(
        name="harmonic_discontinuous", params={"s": sp, "kappa": kappa, "n": n}, s_of_t=s,
        ds_dt=ds, d2s_dt2=d2s, jumps=(-half, half), support=(-half, half),
        analytic_fourier=fourier, time_scale=1.0 / kappa, amplitude_param="s", z_of_t=z)


def _sech(u):
    e = np.exp(-np.abs(u))
    return 2.0 * e / (1.0 + e * e)


def _arctx(params):
    _check_unknown(params, {"v", "kappa"})
    v = _param(params, "v")
    kappa = _param(params, "kappa", 1.0, positive=True)

    def s(t):
        return (v / 6.0) * _sech(kappa * _arr(t))

    def ds(t):
        u = kappa * _arr(t)
        return -(v * kappa / 6.0) * np.tanh(u) * _sech(u)

    def d2s(t):
        u = kappa * _arr(t)
        return -(v * kappa ** 2 / 6.0) * (1.0 - 2.0 * np.tanh(u) ** 2) * _sech(u)

    def fourier(w):
        x = _arr(w) * math.pi / (2.0 * kappa)
        return (v / 6.0) / SQRT_2PI * (math.pi / kappa) * _sech(x) + 0j

    return EntropyProfile(
        name="arctx", params={"v": v, "kappa": kappa}, s_of_t=s, ds_dt=ds, d2s_dt2=d2s,
        analytic_fourier=fourier, time_scale=1.0 / kappa, amplitude_param="v",
        z_of_t=lambda t: -2.0 * v / kappa * np.arctan(np.exp(kappa * _arr(t))))


#: name -> (builder, required params, optional params with defaults)
CATALOG = {
    "static": (_static, (), {"kappa": 1.0}),
    "constant": (_constant, ("S0",), {"kappa": 1.0}),
    "uniform_eternal": (_uniform_eternal, ("S0",), {"kappa": 1.0}),
    "uniform_semi_eternal": (_uniform_semi_eternal, ("S0",), {"kappa": 1.0}),
    "lorentzian": (_lorentzian, ("S_max",), {"kappa": 1.0}),
    "black_hole_analog": (_black_hole_analog, ("M",), {}),
    "beta_decay": (_beta_decay, ("s",), {"kappa": 1.0, "e": 1.0}),
    "harmonic_finite": (_harmonic_finite, ("s", "n"), {"kappa": 1.0}),
    "harmonic_damped": (_harmonic_damped, ("s", "n"), {"kappa": 1.0}),
    "harmonic_discontinuous": (_harmonic_discontinuous, ("s", "n"), {"kappa": 1.0}),
    "arctx": (_arctx, ("v",), {"kappa": 1.0}),
}


def make_profile(name: str, params: Mapping[str, float] | None = None) -> EntropyProfile:
    """Build a catalog profile by name.

    >>> p = make_profile("lorentzian", {"S_max": 0.01})
    >>> round(float(abs(p(1 / 3 ** 0.5))), 12)
    0.01
    """
    try:
        builder = CATALOG[name][0]
    except KeyError:
        raise ProfileError(f"unknown profile '{name}'; known: {', '.join(CATALOG)}") from None
    return builder(dict(params or {}))


def tabulated_profile(t, s, name: str = "tabulated") -> EntropyProfile:
    """Profile from samples, interpolated by a cubic spline.

    Outside the sampled range S is held at the end values, which become the
    declared asymptotics.  Derivatives come from the spline.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if t.ndim != 1 or t.shape != s.shape or len(t) < 4:
        raise ProfileError("need matching 1-D arrays with at least 4 samples")
    if np.any(np.diff(t) <= 0):
        raise ProfileError("sample times must be strictly increasing")
    spline = CubicSpline(t, s)
    d1, d2 = spline.derivative(1), spline.derivative(2)
    lo, hi = float(t[0]), float(t[-1])

    def clip_eval(fn, outside_lo, outside_hi):
        def f(x):
            x = _arr(x)
            return np.where(x < lo, outside_lo, np.where(x > hi, outside_hi, fn(np.clip(x, lo, hi))))
        return f

    anti = spline.antiderivative()

    def z(x):
        x = _arr(x)
        inner = -6.0 * anti(np.clip(x, lo, hi))
        return inner - 6.0 * s[0] * np.minimum(x - lo, 0.0) - 6.0 * s[-1] * np.maximum(x - hi, 0.0)

    # a mismatch between the end sample and zero is a jump only if S is held there
    return EntropyProfile(
        name=name, params={}, s_of_t=clip_eval(spline, s[0], s[-1]),
        ds_dt=clip_eval(d1, 0.0, 0.0), d2s_dt2=clip_eval(d2, 0.0, 0.0),
        asymptotics=(float(s[0]), float(s[-1])), kinks=(lo, hi), support=(lo, hi),
        time_scale=float(np.median(np.diff(t))) * 16, z_of_t=z)


def trajectory_from_entropy(p: EntropyProfile) -> TrajectoryProfile:
    """Mirror trajectory dual to ``p``: v = -6 S and z = -6 int S dt.

    Uses the catalog closed form for z when present; otherwise integrates S
    from the left end of the support (or t = 0) with z = 0 there.
    """
    v = lambda t: -6.0 * np.asarray(p.s_of_t(t))
    a = None if p.ds_dt is None else (lambda t: -6.0 * np.asarray(p.ds_dt(t)))
    if p.z_of_t is not None:
        z = p.z_of_t
    else:
        t0 = p.support[0] if p.support and math.isfinite(p.support[0]) else 0.0
        pts = p.breakpoints

        def z(t):
            t = np.atleast_1d(_arr(t))
            out = np.array([
                -6.0 * integrate(p.s_of_t, t0, ti, rtol=1e-12, atol=1e-15, points=pts).require("z(t)")
                for ti in t.ravel()]).reshape(t.shape)
            return out
    return TrajectoryProfile(z_of_t=z, v_of_t=v, params=dict(p.params), source=p.name, a_of_t=a)


def _validation_grid(p: EntropyProfile, points: int):
    if p.name == "black_hole_analog":
        half = 3.0 * p.time_scale
    else:
        half = 40.0 / p.kappa
    if p.support is not None:
        for x in p.support:
            if math.isfinite(x):
                half = max(half, 1.05 * abs(x))
    return np.linspace(-half, half, points)


def validate_profile(p: EntropyProfile, points: int = 4096) -> ValidationReport:
    """Physical-validity checks on a dense time grid (report only, never raises)."""
    grid = _validation_grid(p, points)
    s = np.asarray(p.s_of_t(grid), dtype=float)
    sup = float(np.max(np.abs(s))) if s.size else 0.0
    lo, hi = p.asymptotics
    notes = []
    # velocities vanish at both ends exactly when the entropy does (S = -v/6)
    rest = lo == 0.0 and hi == 0.0
    page = rest
    if not p.bounded:
        notes.append("entropy is unbounded; no finite purity defect")
        consistent = True
    else:
        far = 1e4 * max(p.time_scale, 1.0 / p.kappa)
        if p.support is not None:
            far = max(far, *(2 * abs(x) for x in p.support if math.isfinite(x)))
        vals = np.asarray(p.s_of_t(np.array([-far, far])), dtype=float)
        scale = max(sup, abs(lo), abs(hi), 1e-300)
        consistent = bool(np.all(np.abs(vals - np.array([lo, hi])) <= 1e-3 * scale))
        if not consistent:
            notes.append("samples at large |t| do not approach the declared asymptotics")
    jump_sizes = {}
    confirmed = True
    for tj in p.jumps:
        h = 1e-9 * max(abs(tj), p.time_scale)
        left, right = np.asarray(p.s_of_t(np.array([tj - h, tj + h])), dtype=float)
        size = float(right - left)
        jump_sizes[tj] = size
        if not (math.isfinite(size) and abs(size) > 1e-12 * max(sup, 1e-300)):
            confirmed = False
            notes.append(f"declared jump at t = {tj:g} not visible on the grid")
    nonrel = sup < S_BOUND
    if not nonrel:
        notes.append("sup |S| >= 1/6: outside the small-velocity regime")
    return ValidationReport(
        profile=p.name, sup_abs_s=sup, non_relativistic=nonrel, asymptotic_rest=rest,
        page_curve=page, purity_defect=p.delta_s, asymptotics_consistent=consistent,
        jumps_confirmed=confirmed, jump_sizes=jump_sizes,
        grid=(float(grid[0]), float(grid[-1]), len(grid)), notes=notes)
