"""Acceptance suite: each criterion is a function returning a CriterionResult.

Reference values that are not closed forms come from independent oracles
(mpmath quadrature, sympy integration) evaluated inside the criterion.
A criterion passes only if every check holds and the runtime stays inside
its budget.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import classify
from .errors import DivergenceError
from .expansion import (beta_exact, beta_series, fourier_power_closed, fourier_power_quadrature,
                        series_residual_scaling)
from .fourier import transform
from .profiles import make_profile
from .specfun import CATALAN
from .spectra import (beta_squared, emission_spectrum, regularized_particle_spectrum,
                      regularized_totals, total_energy_spectral, total_energy_stress,
                      total_particles)

__all__ = ["CriterionResult", "CRITERIA", "run_criterion", "run_all", "format_line"]

PI = math.pi


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    runtime: float
    budget: float
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class _Checks:
    """Collects named checks; each records the values it compared."""

    def __init__(self):
        self.items = {}

    def rel(self, name, got, want, tol):
        err = abs(got - want) / abs(want)
        self.items[name] = {"got": got, "want": want, "rel_err": err, "tol": tol, "ok": bool(err <= tol)}

    def abs(self, name, got, want, tol):
        err = abs(got - want)
        self.items[name] = {"got": got, "want": want, "abs_err": err, "tol": tol, "ok": bool(err <= tol)}

    def flag(self, name, ok, **info):
        self.items[name] = dict(info, ok=bool(ok))

    @property
    def ok(self):
        return all(v["ok"] for v in self.items.values())


def _rel_spread(x):
    x = np.asarray(x, dtype=float)
    return float((x.max() - x.min()) / abs(x.mean()))


def _r_squared(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    coef = np.polyfit(x, y, 1)
    resid = y - np.polyval(coef, x)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    return 1.0 - float(np.sum(resid ** 2)) / ss_tot, coef


# ---------------------------------------------------------------------------
# criteria


def criterion_1(c: _Checks, notes: list):
    cases = [("static", {}), ("constant", {"S0": 0.01}), ("uniform_eternal", {"S0": 0.01})]
    for name, params in cases:
        p = make_profile(name, params)
        for kind in ("exponential_time", "energy_dependent"):
            n, e, _ = regularized_totals(p, kind)
            c.abs(f"{name}/{kind}/N", n, 0.0, 1e-10)
            c.abs(f"{name}/{kind}/E", e, 0.0, 1e-10)


def criterion_2(c: _Checks, notes: list):
    s0 = 0.01
    p = make_profile("uniform_semi_eternal", {"S0": s0})
    pgrid = np.array([0.1, 0.5, 1.0])
    for kind in ("exponential_time", "energy_dependent"):
        spec, _ = regularized_particle_spectrum(p, pgrid, kind)
        for pv, got in zip(pgrid, spec.N_p):
            want = 12 * math.sqrt(2) / PI ** 1.5 * s0 ** 2 / pv
            c.rel(f"{kind}/N({pv:g})", float(got), want, 1e-3)
        alt = 18 * s0 ** 2 / (5 * PI ** 2 * pgrid ** 3)
        dev = float(np.max(np.abs(spec.N_p / alt - 1)))
        notes.append(f"{kind}: max deviation from 18 S0^2/(5 pi^2 p^3) is {dev:.1e}")
    rep = classify(p)
    c.flag("diagnostics: N log IR divergence", rep.n_divergence == "log" and not rep.n_convergent,
           n_divergence=rep.n_divergence, gamma_ir=rep.gamma_ir)


def criterion_3(c: _Checks, notes: list):
    smax = 0.01
    p = make_profile("lorentzian", {"S_max": smax})
    want = 32 * smax ** 2 / 3
    c.rel("N (forced numeric)", total_particles(p, tol=1e-9, force_numeric=True), want, 1e-6)
    c.rel("E_spectral (forced numeric)", total_energy_spectral(p, tol=1e-9, force_numeric=True),
          want, 1e-6)
    c.rel("E_stress", total_energy_stress(p), want, 1e-6)


def criterion_4(c: _Checks, notes: list):
    m = 0.1
    p = make_profile("black_hole_analog", {"M": m})
    c.rel("E_spectral", total_energy_spectral(p, tol=1e-9), m, 1e-4)
    c.rel("N_total", total_particles(p, tol=1e-9), 768 * CATALAN / PI * m ** 4, 1e-4)


def criterion_5(c: _Checks, notes: list):
    s, kappa, e = 0.05, 1.0, 1.0
    p = make_profile("beta_decay", {"s": s, "kappa": kappa, "e": e})
    w = np.geomspace(0.01, 5.0, 60)
    planck = emission_spectrum(p, w) * np.expm1(2 * PI * w / kappa)
    c.flag("N(w)(exp(2 pi w)-1) constant", _rel_spread(planck) <= 1e-6,
           spread=_rel_spread(planck), value=float(planck.mean()),
           expected=e ** 2 * s ** 2 / (3 * PI * kappa))
    want = e ** 2 * kappa * s ** 2 / (72 * PI)
    c.rel("E_stress", total_energy_stress(p), want, 1e-8)
    c.rel("E_spectral", total_energy_spectral(p, tol=1e-9), want, 1e-5)
    rep = classify(p)
    c.abs("gamma_ir", rep.gamma_ir, -1.0, 0.05)
    c.flag("N divergent", not rep.n_convergent, n_divergence=rep.n_divergence)


def _harmonic_finite_oracle(n: int, s: float, kappa: float = 1.0, dps: int = 20) -> float:
    """N = (24/pi) int_0^inf w |S_w|^2 dw with the closed-form S_w, by mpmath."""
    import mpmath as mp

    with mp.workdps(dps):
        s, kappa = mp.mpf(s), mp.mpf(kappa)

        def f(w):
            if abs(w - kappa) < mp.mpf(10) ** (-dps // 2):
                sw2 = PI / 2 * (n * s / kappa) ** 2
            else:
                sw2 = 2 / mp.pi * (s * kappa * mp.sin(mp.pi * n * w / kappa) / (kappa ** 2 - w ** 2)) ** 2
            return w * sw2

        step = kappa / n
        top = 40 * kappa
        body = mp.quad(f, mp.linspace(0, top, int(top / step) + 1))
        # tail: mean of sin^2 is 1/2; the oscillating remainder is below env(top) * step
        env = lambda w: w * s ** 2 * kappa ** 2 / (mp.pi * (kappa ** 2 - w ** 2) ** 2)
        tail = mp.quad(env, [top, mp.inf])
        return float(24 / mp.pi * (body + tail))


def criterion_6(c: _Checks, notes: list):
    s = 0.01
    ratios = []
    for n in (1, 5, 10, 20):
        p = make_profile("harmonic_finite", {"s": s, "n": n})
        want = 6 * n * s ** 2
        c.rel(f"n={n}/E_stress", total_energy_stress(p), want, 1e-10)
        c.rel(f"n={n}/E_spectral", total_energy_spectral(p, tol=1e-8), want, 1e-5)
        nt = total_particles(p, tol=1e-8)
        ratios.append(nt / (12 * n * s ** 2))
        if n == 20:
            c.rel("n=20/N vs mpmath oracle", nt, _harmonic_finite_oracle(n, s), 1e-4)
    r = np.array(ratios)
    c.flag("N/(12 n s^2) increasing in (0, 1)",
           bool(np.all(np.diff(r) > 0) and np.all((r > 0) & (r < 1))), ratios=ratios)


def _damped_stress_oracle():
    """Symbolic (6/pi) int_0^inf S'^2 dt for S = s exp(-kappa t/(4 pi n)) sin(kappa t)."""
    import sympy as sp

    t, s, kappa, n = sp.symbols("t s kappa n", positive=True)
    a = kappa / (4 * sp.pi * n)
    S = s * sp.exp(-a * t) * sp.sin(kappa * t)
    expr = sp.simplify(6 / sp.pi * sp.integrate(sp.diff(S, t) ** 2, (t, 0, sp.oo)))
    return sp.lambdify((s, kappa, n), expr, "mpmath"), expr


def criterion_7(c: _Checks, notes: list):
    s, kappa = 0.01, 1.0
    oracle, expr = _damped_stress_oracle()
    notes.append(f"symbolic oracle: E = {expr}")
    ratios = []
    for n in (1, 5, 10, 20):
        p = make_profile("harmonic_damped", {"s": s, "n": n, "kappa": kappa})
        want = float(oracle(s, kappa, n))
        c.rel(f"n={n}/E_stress vs symbolic", total_energy_stress(p), want, 1e-8)
        ratios.append(total_particles(p, tol=1e-8) / (12 * n * s ** 2))
    # two candidate closed forms, 6 n s^2 kappa and 3 n s^2 kappa: which one does the oracle match?
    big = 1000
    exact = float(oracle(s, kappa, big))
    six, three = 6 * big * s ** 2 * kappa, 3 * big * s ** 2 * kappa
    supported = "6*n*s^2*kappa" if abs(exact / six - 1) < abs(exact / three - 1) else "3*n*s^2*kappa"
    c.flag("oracle decides 6ns^2k vs 3ns^2k", True, supported=supported,
           rel_to_6=exact / six - 1, rel_to_3=exact / three - 1)
    notes.append(f"the oracle supports {supported}, not "
                 f"{'3*n*s^2*kappa' if supported.startswith('6') else '6*n*s^2*kappa'}")
    r = np.array(ratios)
    c.flag("N/(12 n s^2) increasing in (0, 1)",
           bool(np.all(np.diff(r) > 0) and np.all((r > 0) & (r < 1))), ratios=ratios)


def criterion_8(c: _Checks, notes: list):
    p = make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1})
    lams = np.array([10.0, 100.0, 1000.0])
    ns = [total_particles(p, tol=1e-8, uv_cutoff=lam) for lam in lams]
    es = [total_energy_spectral(p, tol=1e-8, uv_cutoff=lam) for lam in lams]
    r2n, cn = _r_squared(np.log(lams), ns)
    r2e, ce = _r_squared(lams, es)
    c.flag("N(L) = a + b ln L, R^2 > 0.999", r2n > 0.999, r2=r2n, a=float(cn[1]), b=float(cn[0]),
           values=ns)
    c.flag("E(L) linear in L, R^2 > 0.999", r2e > 0.999, r2=r2e, slope=float(ce[0]), values=es)
    rep = classify(p)
    c.flag("diagnostics flags the jump", rep.jump_detected, uv_exponent=rep.uv_exponent)


def criterion_9(c: _Checks, notes: list):
    v, kappa = 0.1, 1.0
    p = make_profile("arctx", {"v": v, "kappa": kappa})
    n_want = 4 * v ** 2 / (3 * PI ** 2) * math.log(2)
    e_want = kappa * v ** 2 / (9 * PI)
    c.rel("N analytic", total_particles(p, tol=1e-10), n_want, 1e-8)
    c.rel("N forced numeric", total_particles(p, tol=1e-8, force_numeric=True), n_want, 1e-5)
    c.rel("E analytic", total_energy_spectral(p, tol=1e-10), e_want, 1e-6)
    c.rel("E forced numeric", total_energy_spectral(p, tol=1e-8, force_numeric=True), e_want, 1e-6)


def criterion_10(c: _Checks, notes: list):
    p, q = 0.3, 0.2
    for fit in series_residual_scaling(p, q, orders=(1, 2, 3), s_values=(0.02, 0.05, 0.1)):
        c.flag(f"m={fit.order} residual slope", fit.relative_deviation <= 0.1,
               slope=fit.slope, expected=fit.expected)
    exact = beta_exact(p, q, 0.1).value
    c.rel("order 6 at (0.3, 0.2, 0.1)", abs(beta_series(p, q, 0.1, 6).value - exact) + abs(exact),
          abs(exact), 1e-6)
    for n in (1, 2, 3):
        for w in (0.3, 1.0, 3.0):
            closed = fourier_power_closed(n, w, 0.1)
            quad = fourier_power_quadrature(n, w, 0.1)
            c.rel(f"F[z^{n}]({w:g})", abs(closed - quad) + abs(quad), abs(quad), 1e-6)


def criterion_11(c: _Checks, notes: list):
    pure = [("lorentzian", {"S_max": 0.01}), ("black_hole_analog", {"M": 0.1}),
            ("harmonic_finite", {"s": 0.01, "n": 3}), ("harmonic_damped", {"s": 0.01, "n": 3}),
            ("arctx", {"v": 0.1})]
    for name, params in pure:
        p = make_profile(name, params)
        c.rel(f"{name}/Parseval", total_energy_spectral(p, tol=1e-9), total_energy_stress(p), 1e-6)
        w = np.array([0.05, 0.7, 3.1])
        sym = max(abs(transform(p, -x) - transform(p, x).conjugate()) for x in w)
        scale = max(abs(transform(p, x)) for x in w)
        c.flag(f"{name}/reality", sym <= 1e-12 * scale, max_dev=sym)
        num = max(abs(transform(p, -x, force_numeric=True) - transform(p, x, force_numeric=True).conjugate())
                  for x in w[:1])
        c.flag(f"{name}/reality (numeric)", num <= 1e-7 * scale, max_dev=num)
        pq = np.array([[0.1, 0.9], [0.4, 2.5], [1.3, 0.2]])
        b1 = beta_squared(p, pq[:, 0], pq[:, 1])
        b2 = beta_squared(p, pq[:, 1], pq[:, 0])
        c.flag(f"{name}/beta symmetry", bool(np.allclose(b1, b2, rtol=1e-13, atol=0)))
    p = make_profile("lorentzian", {"S_max": 0.01})
    n0, e0 = total_particles(p, tol=1e-10), total_energy_spectral(p, tol=1e-10)
    for amp in (0.5, 3.0):
        q = p.scaled(amp)
        c.rel(f"amplitude x{amp:g}: N", total_particles(q, tol=1e-10), amp ** 2 * n0, 1e-6)
        c.rel(f"amplitude x{amp:g}: E", total_energy_spectral(q, tol=1e-10), amp ** 2 * e0, 1e-6)
    for lam in (0.5, 4.0):
        q = p.rescaled(lam)
        c.rel(f"rescale t->{lam:g}t: N", total_particles(q, tol=1e-10), n0, 1e-6)
        c.rel(f"rescale t->{lam:g}t: E", total_energy_spectral(q, tol=1e-10), lam * e0, 1e-6)
        c.rel(f"rescale t->{lam:g}t: E_stress", total_energy_stress(q), lam * e0, 1e-6)


#: id -> (title, function, runtime budget in seconds)
CRITERIA = {
    1: ("null tests under both regulators", criterion_1, 5.0),
    2: ("semi-eternal uniform acceleration", criterion_2, 30.0),
    3: ("Lorentzian, forced-numeric pipeline", criterion_3, 10.0),
    4: ("black-hole analog totals", criterion_4, 60.0),
    5: ("beta decay: Planck form, energies, IR exponent", criterion_5, 30.0),
    6: ("harmonic finite oscillations", criterion_6, 120.0),
    7: ("harmonic damped: symbolic stress energy", criterion_7, 60.0),
    8: ("discontinuous cosine: cutoff scaling", criterion_8, 60.0),
    9: ("arctan mirror totals", criterion_9, 10.0),
    10: ("beta-coefficient series vs exact", criterion_10, 30.0),
    11: ("property suite", criterion_11, 60.0),
}


def run_criterion(cid: int) -> CriterionResult:
    title, fn, budget = CRITERIA[cid]
    checks, notes = _Checks(), []
    t0 = time.perf_counter()
    error = None
    try:
        fn(checks, notes)
    except (ArithmeticError, ValueError, RuntimeError) as exc:
        # DivergenceError and ConvergenceError land here too; the criterion fails with the reason
        error = f"{type(exc).__name__}: {exc}"
    runtime = time.perf_counter() - t0
    if error:
        notes.append(error)
    in_budget = runtime <= budget
    if not in_budget:
        notes.append(f"runtime {runtime:.1f} s exceeds budget {budget:g} s")
    passed = error is None and checks.ok and in_budget
    return CriterionResult(cid, title, passed, runtime, budget, checks.items, notes)


def run_all(ids=None) -> list[CriterionResult]:
    return [run_criterion(i) for i in (ids or sorted(CRITERIA))]


def format_line(r: CriterionResult) -> str:
    status = "PASS" if r.passed else "FAIL"
    failed = [k for k, v in r.checks.items() if not v["ok"]]
    tail = f"  failed: {', '.join(failed)}" if failed else ""
    if not r.passed and not failed and r.notes:
        tail = f"  {r.notes[-1]}"
    return f"criterion {r.id:2d} {status}  ({r.runtime:6.2f} s / {r.budget:g} s)  {r.title}{tail}"
