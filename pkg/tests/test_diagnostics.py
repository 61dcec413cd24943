import math

import numpy as np
import pytest

from entropic_particles import (RegularizationScheme, classify, make_profile, tabulated_profile,
                                total_particles, transform_regularized)
from entropic_particles.diagnostics import (STEP_LAW_NOTE, growth_class, ir_exponent,
                                            measured_ir_amplitude, purity_defect, structural_verdict,
                                            uv_falloff)


def test_ir_exponents():
    assert ir_exponent(make_profile("black_hole_analog", {"M": 0.1})).exponent == pytest.approx(0, abs=0.01)
    assert ir_exponent(make_profile("arctx", {"v": 0.1})).exponent == pytest.approx(0, abs=0.01)
    assert ir_exponent(make_profile("lorentzian", {"S_max": 0.01})).exponent == pytest.approx(1, abs=0.02)
    fit = ir_exponent(make_profile("beta_decay", {"s": 0.05}))
    assert fit.exponent == pytest.approx(-1, abs=0.05)
    assert not fit.low_confidence


def test_semi_eternal_exponent_after_regulator_removal():
    # the regulated transform s0/(sqrt(2 pi) (eps + i w)^2) tends to -s0/(sqrt(2 pi) w^2)
    fit = ir_exponent(make_profile("uniform_semi_eternal", {"S0": 0.01}))
    assert fit.exponent == pytest.approx(-2, abs=1e-6)
    assert fit.notes


def test_uv_falloff():
    assert uv_falloff(make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1})).exponent == pytest.approx(-1, abs=0.05)
    assert uv_falloff(make_profile("harmonic_finite", {"s": 0.01, "n": 1})).exponent == pytest.approx(-2, abs=0.05)
    fit = uv_falloff(make_profile("arctx", {"v": 0.1}))
    assert fit.exponent < -4
    assert any("exponential" in n for n in fit.notes)


def test_purity_defect():
    s = 0.05
    ds, amp = purity_defect(make_profile("beta_decay", {"s": s}))
    assert ds == pytest.approx(-s / 6, rel=1e-15)
    assert amp == pytest.approx(s / 6 / math.sqrt(2 * math.pi), rel=1e-15)
    assert tuple(purity_defect(make_profile("lorentzian", {"S_max": 0.01}))) == (0.0, 0.0)
    ds, amp = purity_defect(make_profile("uniform_semi_eternal", {"S0": 0.01}))
    assert math.isnan(ds) and math.isnan(amp)


@pytest.mark.parametrize("s,kappa", [(0.05, 1.0), (0.02, 3.0), (-0.1, 0.5)])
def test_step_law_matches_measured_amplitude(s, kappa):
    p = make_profile("beta_decay", {"s": s, "kappa": kappa})
    predicted = purity_defect(p).predicted_ir_amplitude
    assert measured_ir_amplitude(p) == pytest.approx(predicted, rel=1e-3)
    # the doubled coefficient is off by a factor 2
    assert abs(measured_ir_amplitude(p) - 2 * predicted) > 0.4 * predicted


def test_step_law_tabulated_step():
    # a smooth step from 0 to 0.01: any finite-dS profile obeys the same law
    t = np.linspace(-20, 20, 801)
    p = tabulated_profile(t, 0.005 * (1 + np.tanh(t)))
    w = 1e-3
    vals = [abs(transform_regularized(p, w, RegularizationScheme("exp", e))) for e in (1e-5, 1e-6)]
    assert w * vals[-1] == pytest.approx(0.01 / math.sqrt(2 * math.pi), rel=1e-3)


def test_classify_examples():
    r = classify(make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1}))
    assert r.jump_detected
    assert (r.n_convergent, r.n_divergence) == (False, "log")
    assert (r.e_convergent, r.e_divergence) == (False, "linear")
    assert any("ln(Lambda)" in n for n in r.notes)

    r = classify(make_profile("beta_decay", {"s": 0.05, "kappa": 1, "e": 1}))
    assert r.gamma_ir == pytest.approx(-1, abs=0.05)
    assert not r.n_convergent and r.e_convergent
    assert r.n_region == "IR"
    assert STEP_LAW_NOTE in r.notes
    assert any("impure" in n for n in r.notes)

    r = classify(make_profile("lorentzian", {"S_max": 0.01}))
    assert r.n_convergent and r.e_convergent and not r.jump_detected


def test_classify_null_profiles():
    for name, params in [("static", {}), ("constant", {"S0": 0.01}), ("uniform_eternal", {"S0": 0.01})]:
        r = classify(make_profile(name, params))
        assert r.null_radiation and r.n_convergent and r.e_convergent


def test_classify_semi_eternal():
    r = classify(make_profile("uniform_semi_eternal", {"S0": 0.01}))
    assert r.requires_regularization
    assert not r.n_convergent and r.n_region == "IR"
    assert any("no finite step" in n for n in r.notes)


@pytest.mark.parametrize("name,params", [("beta_decay", {"s": 0.05}), ("lorentzian", {"S_max": 0.01}),
                                         ("harmonic_discontinuous", {"s": 0.01, "n": 2})])
def test_classification_invariant_under_amplitude(name, params):
    p = make_profile(name, params)
    base = classify(p)
    for c in (0.1, 7.0):
        r = classify(p.scaled(c))
        assert (r.n_convergent, r.e_convergent, r.n_divergence, r.e_divergence, r.jump_detected) == \
            (base.n_convergent, base.e_convergent, base.n_divergence, base.e_divergence, base.jump_detected)
        assert r.gamma_ir == pytest.approx(base.gamma_ir, abs=1e-9)
        assert r.uv_exponent == pytest.approx(base.uv_exponent, abs=1e-9)


def test_discontinuous_count_grows_logarithmically():
    p = make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1})
    lam = np.array([1e2, 1e3, 1e4])
    n = np.array([total_particles(p, uv_cutoff=x) for x in lam])
    coef = np.polyfit(np.log(lam), n, 1)
    resid = n - np.polyval(coef, np.log(lam))
    r2 = 1 - resid @ resid / np.sum((n - n.mean()) ** 2)
    assert r2 > 0.999
    assert coef[0] > 0


def test_structural_verdict():
    assert structural_verdict(make_profile("constant", {"S0": 0.1}))["regularize"]
    v = structural_verdict(make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1}))
    assert v["N"] == ("log", "UV") and v["E"] == ("linear", "UV")
    assert structural_verdict(make_profile("beta_decay", {"s": 0.05}))["N"] == ("log", "IR")


@pytest.mark.parametrize("x,end,expected", [
    (-1.0, "UV", "log"), (0.0, "UV", "linear"), (1.5, "UV", "power"), (-2.0, "UV", None),
    (-1.0, "IR", "log"), (0.0, "IR", None), (-3.0, "IR", "power"),
    (math.inf, "UV", "power"), (-math.inf, "UV", None), (math.nan, "UV", None),
])
def test_growth_class(x, end, expected):
    assert growth_class(x, end, 0.1) == expected
