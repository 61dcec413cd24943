"""Infrared and ultraviolet behaviour of S_w and what it implies for N and E.

With |S_w| ~ w^gamma as w -> 0 and |S_w| ~ w^u as w -> inf:

* N = (24/pi) int w |S_w|^2 dw converges iff gamma > -1 and u < -1;
* E = (12/pi) int w^2 |S_w|^2 dw converges iff gamma > -3/2 and u < -3/2.

A nonzero purity defect dS = S(+inf) - S(-inf) forces gamma = -1 with
w |S_w| -> |dS| / sqrt(2 pi); a finite jump of S forces u = -1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .fourier import DEFAULT_EPS, DEFAULT_TOL, RegularizationScheme, SpectralEntropy, regularized_limit
from .profiles import EntropyProfile

__all__ = [
    "IR_WINDOW",
    "UV_WINDOW",
    "PowerLawFit",
    "PurityDefect",
    "DiagnosticsReport",
    "structural_verdict",
    "frequency_unit",
    "ir_exponent",
    "purity_defect",
    "measured_ir_amplitude",
    "uv_falloff",
    "classify",
    "growth_class",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
#: fit windows in units of the profile frequency scale
IR_WINDOW = (1e-4, 1e-1)
UV_WINDOW = (10.0, 1000.0)
IR_MARGIN = 0.1
UV_MARGIN = 0.2
STEP_LAW_NOTE = ("IR step law: w|S_w| -> |dS|/sqrt(2 pi); the variant 2|dS|/sqrt(2 pi) "
                 "is inconsistent with the step-function integral and with the exact "
                 "beta-decay transform")


@dataclass
class PowerLawFit:
    exponent: float
    residual: float
    low_confidence: bool
    window: tuple
    notes: list = field(default_factory=list)

    def __float__(self):
        return float(self.exponent)


class PurityDefect(NamedTuple):
    delta_s: float
    predicted_ir_amplitude: float


@dataclass
class DiagnosticsReport:
    profile: str
    gamma_ir: float
    gamma_residual: float
    gamma_low_confidence: bool
    uv_exponent: float
    delta_s: float
    predicted_ir_amplitude: float | None
    n_convergent: bool
    e_convergent: bool
    n_divergence: str | None = None
    e_divergence: str | None = None
    n_region: str | None = None
    e_region: str | None = None
    jump_detected: bool = False
    requires_regularization: bool = False
    null_radiation: bool = False
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {k: (None if isinstance(v, float) and math.isnan(v) else v)
                for k, v in self.__dict__.items()}


def frequency_unit(p: EntropyProfile) -> float:
    """Frequency scale used for the fit windows: kappa when defined, else 1/time_scale."""
    if "kappa" in p.params:
        return p.kappa
    return 1.0 / p.time_scale


def structural_verdict(p: EntropyProfile) -> dict:
    """Convergence verdict read off the declared metadata (no sampling).

    Returns {"regularize": bool, "N": (class, region) or None,
    "E": (class, region) or None}.
    """
    out = {"regularize": False, "N": None, "E": None}
    if not p.integrable and p.analytic_fourier is None:
        out["regularize"] = True
        return out
    ds = p.delta_s
    if math.isfinite(ds) and ds != 0.0:
        out["N"] = ("log", "IR")
    if p.jumps:
        # |S_w| ~ 1/w: N ~ log(Lambda), E ~ Lambda
        out["N"] = ("log", "IR+UV") if out["N"] else ("log", "UV")
        out["E"] = ("linear", "UV")
    return out


def _fit_loglog(w, a):
    lw, la = np.log(w), np.log(a)
    slope, icpt = np.polyfit(lw, la, 1)
    resid = float(np.sqrt(np.mean((la - (slope * lw + icpt)) ** 2)))
    return float(slope), float(icpt), resid


def _regularized_abs(p: EntropyProfile, w: np.ndarray, tol: float):
    """|S_w| after removing an energy-dependent regulator, pointwise in w."""
    fams = []
    for eps in DEFAULT_EPS:
        se = SpectralEntropy(p, tol, scheme=RegularizationScheme("energy_dependent", eps))
        fams.append(np.abs(se.eval(w)))
    fams = np.array(fams)
    out = np.empty(len(w))
    for i in range(len(w)):
        # members vanishing like eps^k leave only extrapolation noise behind
        lim = regularized_limit(fams[:, i], DEFAULT_EPS, abs_tol=1e-6 * np.max(fams[:, i]),
                                power=1)
        out[i] = lim.value if lim.finite else math.inf
    return out


def _abs_transform(p: EntropyProfile, w, tol, force_numeric=False):
    w = np.asarray(w, dtype=float)
    if not p.integrable and p.analytic_fourier is None:
        return _regularized_abs(p, w, tol), True
    se = SpectralEntropy(p, tol, force_numeric=force_numeric)
    return np.abs(se.eval(w)), False


def ir_exponent(p: EntropyProfile, window=IR_WINDOW, points: int = 25,
                tol: float = DEFAULT_TOL, force_numeric: bool = False) -> PowerLawFit:
    """Least-squares slope of log|S_w| against log w over ``window`` (units of kappa)."""
    unit = frequency_unit(p)
    w = np.geomspace(window[0], window[1], points) * unit
    a, regularized = _abs_transform(p, w, tol, force_numeric)
    notes = ["transform taken after removing an energy-dependent regulator"] if regularized else []
    scale = np.max(np.abs(a)) if a.size else 0.0
    if not np.all(np.isfinite(a)):
        return PowerLawFit(math.nan, math.inf, True, window, notes + ["regulator could not be removed"])
    if scale == 0.0 or np.all(a <= 1e-13 * max(scale, 1e-300)) or np.any(a == 0):
        return PowerLawFit(math.nan, math.nan, True, window,
                           notes + ["S_w vanishes in the IR window; exponent undefined"])
    slope, _, resid = _fit_loglog(w, a)
    low = resid > 0.1
    if low:
        notes.append(f"fit residual {resid:.3f} > 0.1: not a clean power law")
    return PowerLawFit(slope, resid, low, window, notes)


def purity_defect(p: EntropyProfile) -> PurityDefect:
    """dS = S(+inf) - S(-inf) and the predicted limit of w|S_w| as w -> 0+."""
    ds = p.delta_s
    if not math.isfinite(ds):
        return PurityDefect(math.nan, math.nan)
    return PurityDefect(ds, abs(ds) / SQRT_2PI)


def measured_ir_amplitude(p: EntropyProfile, w0: float = 1e-6, tol: float = DEFAULT_TOL) -> float:
    """Limit of w|S_w| as w -> 0+, by Richardson extrapolation from w0 and w0/2."""
    unit = frequency_unit(p)
    w = np.array([w0, 0.5 * w0]) * unit
    a, _ = _abs_transform(p, w, tol)
    g = w * a
    return float(2.0 * g[1] - g[0])


def _octave_envelope(p, window, per_bin, tol, force_numeric):
    unit = frequency_unit(p)
    lo, hi = window
    n_bins = max(2, int(math.ceil(math.log2(hi / lo))))
    edges = np.geomspace(lo, hi, n_bins + 1) * unit
    w = np.concatenate([np.linspace(a, b, per_bin, endpoint=False) for a, b in zip(edges[:-1], edges[1:])])
    a, _ = _abs_transform(p, w, tol, force_numeric)
    a = a.reshape(n_bins, per_bin)
    w = w.reshape(n_bins, per_bin)
    idx = np.argmax(a, axis=1)
    rows = np.arange(n_bins)
    return w[rows, idx], a[rows, idx]


def uv_falloff(p: EntropyProfile, window=UV_WINDOW, per_bin: int = 64,
               tol: float = DEFAULT_TOL, force_numeric: bool = False) -> PowerLawFit:
    """Log-log slope of the upper envelope of |S_w| over ``window`` (units of kappa).

    The envelope is the maximum of |S_w| in each octave, so oscillating
    transforms (sinc-like factors) still give a meaningful slope.
    """
    wm, am = _octave_envelope(p, window, per_bin, tol, force_numeric)
    notes = []
    if not np.all(np.isfinite(am)):
        return PowerLawFit(math.nan, math.inf, True, window, ["regulator could not be removed"])
    peak = np.max(am) if am.size else 0.0
    if peak == 0.0:
        return PowerLawFit(math.nan, math.nan, True, window, ["S_w vanishes in the UV window"])
    keep = am > 0
    if keep.sum() < 2:
        return PowerLawFit(-math.inf, math.nan, True, window,
                           ["S_w underflows across the UV window: faster than any power"])
    slope, _, resid = _fit_loglog(wm[keep], am[keep])
    # local slopes steepening along the window indicate exponential decay
    local = np.diff(np.log(am[keep])) / np.diff(np.log(wm[keep]))
    if slope < -4 or (len(local) > 2 and local[-1] < local[0] - 1.0):
        notes.append("decay faster than any fitted power (exponential envelope)")
    if not keep.all():
        notes.append("some envelope samples underflow to zero")
    return PowerLawFit(slope, resid, resid > 0.2 and slope >= -4, window, notes)


def growth_class(integrand_exponent: float, end: str, margin: float) -> str | None:
    """How int w^x dw behaves at ``end`` ("IR": w -> 0, "UV": w -> inf).

    Returns None when convergent, else "log", "linear" or "power".
    """
    if not math.isfinite(integrand_exponent):
        if math.isnan(integrand_exponent):
            return None
        return None if (integrand_exponent > 0) == (end == "IR") else "power"
    d = integrand_exponent + 1.0
    if end == "IR":
        d = -d
    if d < -margin:
        return None
    if abs(d) <= margin:
        return "log"
    if abs(d - 1.0) <= margin:
        return "linear"
    return "power"


def classify(p: EntropyProfile, ir_window=IR_WINDOW, uv_window=UV_WINDOW,
             tol: float = DEFAULT_TOL, force_numeric: bool = False) -> DiagnosticsReport:
    """Measure the IR/UV exponents and decide whether N and E converge."""
    notes = []
    struct = structural_verdict(p)
    ir = ir_exponent(p, ir_window, tol=tol, force_numeric=force_numeric)
    uv = uv_falloff(p, uv_window, tol=tol, force_numeric=force_numeric)
    notes += ir.notes + uv.notes
    ds, amp = purity_defect(p)
    null = math.isnan(ir.exponent) and math.isnan(uv.exponent)
    if null:
        notes.append("S_w vanishes identically (after regulator removal): no radiation, N = E = 0")
    if not math.isfinite(ds):
        notes.append("entropy unbounded: no finite step; IR handled by the exponent fit only")

    def verdict(ir_shift, uv_shift):
        cls_ir = None if math.isnan(ir.exponent) else growth_class(ir_shift + 2 * ir.exponent, "IR", 2 * IR_MARGIN)
        cls_uv = None if math.isnan(uv.exponent) else growth_class(uv_shift + 2 * uv.exponent, "UV", 2 * UV_MARGIN)
        if cls_ir and cls_uv:
            worst = cls_uv if cls_uv != "log" else cls_ir
            return worst, "IR+UV"
        if cls_ir:
            return cls_ir, "IR"
        if cls_uv:
            return cls_uv, "UV"
        return None, None

    n_cls, n_reg = verdict(1.0, 1.0)
    e_cls, e_reg = verdict(2.0, 2.0)
    jump = bool(p.jumps) or (not math.isnan(uv.exponent) and abs(uv.exponent + 1.0) <= UV_MARGIN)
    if n_cls and "IR" in n_reg:
        notes.append("IR divergence: the entropy does not return to its initial value (impure final state)")
    if n_cls and "UV" in n_reg or jump:
        notes.append("UV divergence from a finite entropy jump: N ~ ln(Lambda), E ~ Lambda")
    if math.isfinite(ds) and ds != 0.0:
        notes.append(STEP_LAW_NOTE)
    # cross-check against the declared metadata
    for q, cls in (("N", n_cls), ("E", e_cls)):
        declared = struct[q]
        if declared and cls is None:
            notes.append(f"declared {declared[0]} divergence of {q} ({declared[1]}) not seen in the fit")
    return DiagnosticsReport(
        profile=p.name, gamma_ir=ir.exponent, gamma_residual=ir.residual,
        gamma_low_confidence=ir.low_confidence, uv_exponent=uv.exponent, delta_s=ds,
        predicted_ir_amplitude=None if math.isnan(amp) else amp,
        n_convergent=n_cls is None, e_convergent=e_cls is None,
        n_divergence=n_cls, e_divergence=e_cls, n_region=n_reg, e_region=e_reg,
        jump_detected=jump, requires_regularization=struct["regularize"],
        null_radiation=null, notes=notes)
