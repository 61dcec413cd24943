"""Particle creation from S_w: |beta_pq|^2, N(p), totals and instantaneous quantities.

    |beta_pq|^2 = (144/pi) p q / w^2 |S_w|^2,          w = p + q
    N(p)        = (144/pi) int_p^inf dw p (w - p) / w^2 |S_w|^2
    N           = (24/pi)  int_0^inf dw w   |S_w|^2
    E           = (12/pi)  int_0^inf dw w^2 |S_w|^2 = (6/pi) int S'(t)^2 dt

Everything is multiplied by charge^2 (only the beta-decay profile carries a
charge other than 1).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import frequency_unit, structural_verdict
from .errors import ConvergenceError, DiscontinuityError, DivergenceError, RegularizationRequired
from .fourier import (DEFAULT_EPS, DEFAULT_TOL, LimitResult, RegularizationScheme,
                      SpectralEntropy, regularized_limit)
from .profiles import EntropyProfile
from .quadrature import integrate, integrate_segments, wynn_epsilon

__all__ = [
    "RadiationSpectrum",
    "Totals",
    "Instantaneous",
    "spectral",
    "beta_squared",
    "particle_spectrum",
    "regularized_particle_spectrum",
    "regularized_totals",
    "total_particles",
    "total_energy_spectral",
    "total_energy_stress",
    "totals_2d",
    "emission_spectrum",
    "instantaneous",
    "energy_per_quantum",
    "compute_totals",
]

PI = math.pi


@dataclass
class RadiationSpectrum:
    """N(p) on a strictly increasing grid, with per-point error estimates."""

    p: np.ndarray
    N_p: np.ndarray
    err: np.ndarray
    profile_id: str
    cutoffs: tuple = (None, None)
    notes: list = field(default_factory=list)

    def __post_init__(self):
        self.p = np.asarray(self.p, dtype=float)
        self.N_p = np.asarray(self.N_p, dtype=float)
        self.err = np.asarray(self.err, dtype=float)
        if self.p.ndim != 1 or np.any(np.diff(self.p) <= 0):
            raise ValueError("spectrum grid must be strictly increasing")
        if self.cutoffs[0] is None and len(self.p):
            self.cutoffs = (float(self.p[-1]), self.cutoffs[1])

    def rows(self):
        return list(zip(self.p.tolist(), self.N_p.tolist(), self.err.tolist()))

    def energy(self) -> float:
        """int p N(p) dp over the grid (trapezoid)."""
        return float(np.trapezoid(self.p * self.N_p, self.p))


@dataclass
class Totals:
    N_total: float | None
    E_spectral: float | None
    E_stress: float | None
    energy_per_quantum: float | None
    errors: dict = field(default_factory=dict)
    divergences: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class Instantaneous:
    power: float
    force: float
    temperature: float


def spectral(p: EntropyProfile, tol: float = DEFAULT_TOL, force_numeric: bool = False,
             workers: int = 1) -> SpectralEntropy:
    """SpectralEntropy for ``p`` (fails for profiles that need a regulator)."""
    return SpectralEntropy(p, tol, force_numeric=force_numeric, workers=workers)


# ---------------------------------------------------------------------------
# frequency integration


def _knots(p: EntropyProfile):
    """Frequencies where |S_w|^2 has structure, and the oscillation period in w."""
    unit = frequency_unit(p)
    width = 1.0 / p.time_scale
    knots = {unit, width}
    period = None
    if p.support is not None and all(math.isfinite(x) for x in p.support):
        period = 2.0 * PI / (p.support[1] - p.support[0])
    return sorted(knots), width, period


def _edges(lo, hi, knots, width, period):
    base = max(lo, 0.0)
    if base > 0 and base < width:
        # geometric cells resolve power laws between the IR cutoff and the width
        pts = list(np.geomspace(base, width, int(math.log2(width / base)) // 2 + 2))
    else:
        pts = [lo] + [base + width * 4.0 ** k for k in range(-12, 1)]
    for k in knots:
        pts += [k + s * width * 2.0 ** j for j in range(-3, 3) for s in (-1, 1)]
        pts.append(k)
    if period is not None:
        top = min(hi, base + 64.0 * max(knots + [width]))
        pts += list(np.arange(base, top, period))
    pts = np.array(pts, dtype=float)
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(np.append(pts, hi))


def _omega_integral(g, lo, hi, p: EntropyProfile, rtol: float, atol: float = 0.0):
    """int_lo^hi g(w) dw, hi possibly inf.  Returns (value, error).

    The body [lo, L0] is split at the profile's structural frequencies and
    (for finite support) at multiples of the oscillation period in w.  An
    infinite upper limit is handled by doubling L and accelerating the
    partial sums with Wynn's epsilon algorithm; the loop stops once the
    accelerated value changes by less than the tolerance over a doubling.
    """
    knots, width, period = _knots(p)
    L0 = max(lo, 0.0) + 64.0 * max(knots + [width])
    body_hi = min(hi, L0)
    edges = _edges(lo, body_hi, knots, width, period)
    vals, errs, _, ok = integrate_segments(g, edges, rtol=rtol / 4, atol=atol, limit=200000)
    total = float(np.sum(vals))
    err = float(np.sum(errs))
    if not ok:
        raise ConvergenceError(f"w-integral body did not converge (error {err:.3e})",
                               value=total, estimate=err)
    if body_hi >= hi:
        return total, err
    partial = [total]
    L = body_hi
    est_prev = None
    stable = 0
    for _ in range(60):
        top = min(2.0 * L, hi)
        if period is not None and (top - L) / period <= 4096:
            sub = np.arange(L, top, period)
            sub = np.unique(np.append(sub, top))
        else:
            sub = np.linspace(L, top, 9)
        tail_atol = max(atol, 1e-3 * rtol * abs(total))
        v, e, _, ok = integrate_segments(g, sub, rtol=rtol / 4, atol=tail_atol, limit=200000)
        if not ok:
            raise ConvergenceError("w-integral tail did not converge", value=total, estimate=float(e.sum()))
        total += float(np.sum(v))
        err += float(np.sum(e))
        partial.append(total)
        L = top
        if math.isfinite(hi):
            # finite cutoff: plain summation up to it, no extrapolation
            if L >= hi:
                return total, err
            continue
        if len(partial) >= 4:
            est, werr = wynn_epsilon(partial[-min(len(partial), 12):])
        else:
            est, werr = total, abs(partial[-1] - partial[-2])
        scale = max(abs(total), atol)
        change = abs(est - est_prev) if est_prev is not None else math.inf
        est_prev = est
        if abs(partial[-1] - partial[-2]) <= 1e-3 * rtol * scale:
            # negligible panel: whatever decay follows cannot matter
            return float(total), err + abs(partial[-1] - partial[-2])
        if max(change, werr) <= rtol * scale:
            stable += 1
            if stable >= 2:
                return float(est), err + max(change, werr)
        else:
            stable = 0
    raise ConvergenceError("w-integral tail extension did not settle", value=total, estimate=werr)


def _gate(p: EntropyProfile, quantity: str, uv_cutoff, ir_cutoff):
    verdict = structural_verdict(p)
    if verdict["regularize"]:
        raise RegularizationRequired(
            f"'{p.name}' needs a regulator; use regularized_totals / regularized_particle_spectrum")
    decl = verdict["N" if quantity == "N" else "E"]
    if decl is None:
        return
    cls, region = decl
    missing = []
    if "IR" in region and ir_cutoff is None:
        missing.append("IR")
    if "UV" in region and uv_cutoff is None:
        missing.append("UV")
    if missing:
        raise DivergenceError(
            f"{quantity} diverges ({cls}, {'+'.join(missing)}) for '{p.name}'; supply a cutoff",
            quantity=quantity, divergence=cls, region="+".join(missing))


def _check_cutoffs(uv_cutoff, ir_cutoff):
    if uv_cutoff is not None and not uv_cutoff > 0:
        raise ValueError("uv_cutoff must be positive")
    if ir_cutoff is not None and not ir_cutoff >= 0:
        raise ValueError("ir_cutoff must be non-negative")
    if uv_cutoff is not None and ir_cutoff is not None and ir_cutoff >= uv_cutoff:
        raise ValueError("ir_cutoff must be below uv_cutoff")


# ---------------------------------------------------------------------------
# spectra


def beta_squared(p: EntropyProfile, pf, qf, tol: float = DEFAULT_TOL, force_numeric: bool = False,
                 se: SpectralEntropy | None = None):
    """|beta_pq|^2 = (144/pi) p q / (p+q)^2 |S_{p+q}|^2 (both sides of the mirror)."""
    pf = np.asarray(pf, dtype=float)
    qf = np.asarray(qf, dtype=float)
    if np.any(pf <= 0) or np.any(qf <= 0):
        raise ValueError("beta_squared needs p, q > 0")
    se = spectral(p, tol, force_numeric) if se is None else se
    w = pf + qf
    out = (144.0 / PI) * p.charge ** 2 * pf * qf / w ** 2 * se.power(w)
    return out if out.ndim else float(out)


def emission_spectrum(p: EntropyProfile, omega, tol: float = DEFAULT_TOL,
                      force_numeric: bool = False):
    """Photon number per unit frequency, (12 e^2 / pi) w |S_w|^2.

    Its first moment int w N(w) dw is the total energy E.
    """
    w = np.asarray(omega, dtype=float)
    se = spectral(p, tol, force_numeric)
    out = (12.0 / PI) * p.charge ** 2 * w * se.power(w)
    return out if out.ndim else float(out)


def _n_of_p(p, se, pv, rtol, uv_cutoff):
    hi = math.inf if uv_cutoff is None else uv_cutoff
    if pv >= hi:
        return 0.0, 0.0
    pref = (144.0 / PI) * p.charge ** 2

    def g(w):
        return pref * pv * (w - pv) / w ** 2 * se.power(w)

    return _omega_integral(g, pv, hi, p, rtol)


def particle_spectrum(p: EntropyProfile, pgrid, tol: float = DEFAULT_TOL,
                      uv_cutoff: float | None = None, force_numeric: bool = False,
                      workers: int = 1) -> RadiationSpectrum:
    """N(p) on ``pgrid`` by adaptive quadrature in w = p + q.

    ``uv_cutoff`` bounds w; it is required for profiles with entropy jumps.
    Grid points may be evaluated in parallel; the output keeps grid order.
    """
    pgrid = np.asarray(pgrid, dtype=float)
    if np.any(pgrid <= 0):
        raise ValueError("spectrum grid must be positive")
    _check_cutoffs(uv_cutoff, None)
    verdict = structural_verdict(p)
    if verdict["regularize"]:
        raise RegularizationRequired(f"'{p.name}' needs a regulator; use regularized_particle_spectrum")
    if p.jumps and uv_cutoff is None:
        raise DivergenceError(f"'{p.name}' has entropy jumps (UV log divergence of N); supply uv_cutoff",
                              quantity="N", divergence="log", region="UV")
    se = spectral(p, tol, force_numeric)
    rtol = tol
    job = lambda pv: _n_of_p(p, se, float(pv), rtol, uv_cutoff)
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            res = list(pool.map(job, pgrid))
    else:
        res = [job(pv) for pv in pgrid]
    vals = np.array([r[0] for r in res])
    errs = np.array([r[1] for r in res])
    notes = []
    if math.isfinite(p.delta_s) and p.delta_s != 0:
        notes.append("impure profile: N(p) ~ 1/p as p -> 0, total N diverges logarithmically")
    return RadiationSpectrum(pgrid, vals, errs, p.name, (float(pgrid[-1]), uv_cutoff), notes)


def _regularized_n_of_p(p, pv, kind, eps, tol):
    se = SpectralEntropy(p, tol, scheme=RegularizationScheme(kind, eps))
    pref = (144.0 / PI) * p.charge ** 2

    def g(w):
        return pref * pv * (w - pv) / w ** 2 * se.power(w)

    return _omega_integral(g, pv, math.inf, p, tol)[0]


def regularized_particle_spectrum(p: EntropyProfile, pgrid, kind: str = "exponential_time",
                                  eps=None, tol: float = DEFAULT_TOL):
    """N(p) with a regulator removed: N^reg(p) at each eps, then regularized_limit.

    Returns (RadiationSpectrum of the limits, list of LimitResult).
    """
    unit = frequency_unit(p)
    eps = tuple(e * unit for e in (eps or DEFAULT_EPS))
    pgrid = np.asarray(pgrid, dtype=float)
    limits = []
    for pv in pgrid:
        fam = [_regularized_n_of_p(p, float(pv), kind, e, tol) for e in eps]
        limits.append(regularized_limit(fam, eps))
    vals = np.array([lim.value for lim in limits])
    errs = np.array([lim.error for lim in limits])
    return RadiationSpectrum(pgrid, vals, errs, p.name, (float(pgrid[-1]), None),
                             [f"regulator: {kind}"]), limits


def regularized_totals(p: EntropyProfile, kind: str = "exponential_time", eps=None,
                       pgrid=None, tol: float = 1e-10):
    """N and E for a profile that needs a regulator.

    The regulator is removed pointwise in p; N and E are then the integrals
    of the limiting N(p) and p N(p).  Contributions that collapse onto p = 0
    are discarded.  Returns (N, E, limits) or raises DivergenceError when the
    limit spectrum is not integrable at small p.
    """
    unit = frequency_unit(p)
    if pgrid is None:
        # p well above the largest eps, so every member is in its asymptotic regime
        pgrid = np.geomspace(1e-1, 1e1, 9) * unit
    spec, limits = regularized_particle_spectrum(p, pgrid, kind, eps, tol)
    bad = [lim for lim in limits if not lim.finite]
    if bad:
        raise DivergenceError(f"N^reg(p) diverges as eps -> 0 ({bad[0].divergence})",
                              quantity="N", divergence=bad[0].divergence, region="IR")
    if np.all(spec.N_p == 0.0):
        return 0.0, 0.0, limits
    # a nonvanishing limit: its small-p behaviour decides convergence
    nz = np.flatnonzero(spec.N_p)[:3]
    lp, ln = np.log(spec.p[nz]), np.log(np.abs(spec.N_p[nz]))
    slope = float(np.polyfit(lp, ln, 1)[0])
    if slope <= -1 + 0.1:
        cls = "log" if abs(slope + 1) <= 0.1 else "power"
        raise DivergenceError(f"limit spectrum N(p) ~ p^{slope:.2f} at small p: N diverges ({cls})",
                              quantity="N", divergence=cls, region="IR")
    n = float(np.trapezoid(spec.N_p, spec.p))
    e = float(np.trapezoid(spec.p * spec.N_p, spec.p))
    return n, e, limits


# ---------------------------------------------------------------------------
# totals


def _total(p, power, tol, uv_cutoff, ir_cutoff, force_numeric, se=None):
    se = spectral(p, tol, force_numeric) if se is None else se
    pref = (24.0 / PI if power == 1 else 12.0 / PI) * p.charge ** 2
    lo = 0.0 if ir_cutoff is None else float(ir_cutoff)
    hi = math.inf if uv_cutoff is None else float(uv_cutoff)

    def g(w):
        w = np.asarray(w, dtype=float)
        out = np.zeros_like(w)
        nz = w > 0
        out[nz] = pref * w[nz] ** power * se.power(w[nz])
        return out

    return _omega_integral(g, lo, hi, p, tol)


def total_particles(p: EntropyProfile, tol: float = DEFAULT_TOL, uv_cutoff: float | None = None,
                    ir_cutoff: float | None = None, force_numeric: bool = False) -> float:
    """N = (24/pi) int w |S_w|^2 dw, optionally restricted to [ir_cutoff, uv_cutoff]."""
    _check_cutoffs(uv_cutoff, ir_cutoff)
    _gate(p, "N", uv_cutoff, ir_cutoff)
    return _total(p, 1, tol, uv_cutoff, ir_cutoff, force_numeric)[0]


def total_energy_spectral(p: EntropyProfile, tol: float = DEFAULT_TOL, uv_cutoff: float | None = None,
                          ir_cutoff: float | None = None, force_numeric: bool = False) -> float:
    """E = (12/pi) int w^2 |S_w|^2 dw."""
    _check_cutoffs(uv_cutoff, ir_cutoff)
    _gate(p, "E", uv_cutoff, ir_cutoff)
    return _total(p, 2, tol, uv_cutoff, ir_cutoff, force_numeric)[0]


def _stencil_derivative(f, h):
    def d(t):
        t = np.asarray(t, dtype=float)
        return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12 * h)
    return d


def _energy_stress(p: EntropyProfile, tol: float):
    if p.jumps:
        raise DiscontinuityError(
            f"'{p.name}' jumps at t = {list(p.jumps)}; S'^2 contains a squared delta "
            "(see diagnostics: UV divergence)")
    if not p.bounded:
        raise DivergenceError(f"S' does not decay for '{p.name}': the stress route diverges",
                              quantity="E", divergence="linear", region="time")
    ds = p.ds_dt or _stencil_derivative(p.s_of_t, 1e-3 * p.time_scale)
    pref = (6.0 / PI) * p.charge ** 2
    a, b = p.support if p.support is not None else (-math.inf, math.inf)
    f = lambda t: pref * np.asarray(ds(t)) ** 2
    pts = list(p.breakpoints)
    # oscillating profiles: cut one-period panels over the body
    if p.support is not None and all(math.isfinite(x) for x in p.support):
        pts += list(np.linspace(a, b, 65))
    elif "n" in p.params and math.isfinite(a):
        period = 2 * PI / p.kappa
        pts += list(a + period * np.arange(1, int(40 * p.time_scale / period)))
    r = integrate(f, a, b, rtol=tol, atol=1e-300, points=pts, scale=p.time_scale, limit=20000)
    return float(r.require("E_stress")), r.error


def total_energy_stress(p: EntropyProfile, tol: float = 1e-12) -> float:
    """E = (6/pi) int S'(t)^2 dt, using the analytic S' when the profile has one."""
    return _energy_stress(p, tol)[0]


def totals_2d(p: EntropyProfile, tol: float = 1e-8, order: int = 8,
              force_numeric: bool = False) -> tuple:
    """(N, E) from the double integrals over (p, q), in variables (w, k = p - q).

    dp dq = dw dk / 2 and -w < k < w.  The inner k integral is done by
    Gauss-Legendre (exact here, the integrand is a polynomial in k), so
    this exercises the change of variables independently of the 1-D forms.
    """
    _gate(p, "N", None, None)
    se = spectral(p, tol, force_numeric)
    x, wts = np.polynomial.legendre.leggauss(order)
    pref = (144.0 / PI) * p.charge ** 2

    def inner(w, moment):
        w = np.asarray(w, dtype=float)
        k = w[:, None] * x[None, :]
        pp, qq = 0.5 * (w[:, None] + k), 0.5 * (w[:, None] - k)
        kern = pp * qq * (pp if moment else 1.0)
        # dk = w dx, Jacobian 1/2
        return 0.5 * w * (kern @ wts) / w ** 2

    def gn(w):
        w = np.asarray(w, dtype=float)
        out = np.zeros_like(w)
        nz = w > 0
        out[nz] = pref * inner(w[nz], False) * se.power(w[nz])
        return out

    def ge(w):
        w = np.asarray(w, dtype=float)
        out = np.zeros_like(w)
        nz = w > 0
        out[nz] = pref * inner(w[nz], True) * se.power(w[nz])
        return out

    n = _omega_integral(gn, 0.0, math.inf, p, tol)[0]
    e = _omega_integral(ge, 0.0, math.inf, p, tol)[0]
    return n, e


def energy_per_quantum(p: EntropyProfile, tol: float = DEFAULT_TOL, force_numeric: bool = False) -> float:
    """E / N; nan when N = 0 (undefined)."""
    _gate(p, "N", None, None)
    _gate(p, "E", None, None)
    se = spectral(p, tol, force_numeric)
    n = _total(p, 1, tol, None, None, force_numeric, se)[0]
    if n == 0:
        return math.nan
    return _total(p, 2, tol, None, None, force_numeric, se)[0] / n


def _at_break(p: EntropyProfile, t: float) -> str | None:
    h = 1e-12 * max(abs(t), p.time_scale)
    for tj in p.jumps:
        if abs(t - tj) <= h:
            return "jump"
    for tk in p.kinks:
        if abs(t - tk) <= h:
            return "kink"
    return None


def instantaneous(p: EntropyProfile, t: float) -> Instantaneous:
    """Power (6/pi) S'^2, self-force (1/pi) S'' and temperature z''/(2 pi), z'' = -6 S'."""
    t = float(t)
    where = _at_break(p, t)
    if where:
        raise DiscontinuityError(f"S is not twice differentiable at t = {t:g} ({where})")
    h = 1e-4 * p.time_scale
    ds = p.ds_dt or _stencil_derivative(p.s_of_t, h)
    d2s = p.d2s_dt2 or _stencil_derivative(ds, h)
    s1 = float(np.asarray(ds(np.array([t])))[0])
    s2 = float(np.asarray(d2s(np.array([t])))[0])
    e2 = p.charge ** 2
    return Instantaneous(power=e2 * 6.0 / PI * s1 * s1, force=e2 * s2 / PI,
                         temperature=-6.0 * s1 / (2.0 * PI))


def compute_totals(p: EntropyProfile, tol: float = DEFAULT_TOL, uv_cutoff: float | None = None,
                   ir_cutoff: float | None = None, force_numeric: bool = False) -> Totals:
    """All totals at once.  Divergent quantities are None with the verdict recorded."""
    _check_cutoffs(uv_cutoff, ir_cutoff)
    out = Totals(None, None, None, None)
    try:
        se = spectral(p, tol, force_numeric)
    except RegularizationRequired as exc:
        out.divergences["S_w"] = exc.to_dict()
        out.notes.append(str(exc))
        se = None
    if se is not None:
        for key, power, q in (("N_total", 1, "N"), ("E_spectral", 2, "E")):
            try:
                _gate(p, q, uv_cutoff, ir_cutoff)
                val, err = _total(p, power, tol, uv_cutoff, ir_cutoff, force_numeric, se)
                setattr(out, key, val)
                out.errors[key] = err
            except DivergenceError as exc:
                out.divergences[key] = exc.to_dict()
    try:
        val, err = _energy_stress(p, min(tol, 1e-10))
        out.E_stress, out.errors["E_stress"] = val, err
    except (DiscontinuityError, DivergenceError) as exc:
        out.divergences["E_stress"] = exc.to_dict()
    if out.N_total is not None and out.E_spectral is not None:
        if out.N_total > 0:
            out.energy_per_quantum = out.E_spectral / out.N_total
            out.errors["energy_per_quantum"] = out.energy_per_quantum * (
                out.errors["N_total"] / out.N_total + out.errors["E_spectral"] / max(out.E_spectral, 1e-300))
        else:
            out.notes.append("N_total = 0: energy per quantum undefined")
    if uv_cutoff is not None or ir_cutoff is not None:
        out.notes.append(f"spectral totals restricted to w in [{ir_cutoff or 0}, {uv_cutoff or 'inf'}]")
    return out
