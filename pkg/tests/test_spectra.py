import math

import numpy as np
import pytest

from entropic_particles import (DiscontinuityError, DivergenceError, RegularizationRequired,
                                beta_squared, compute_totals, emission_spectrum, energy_per_quantum,
                                instantaneous, make_profile, particle_spectrum, regularized_totals,
                                total_energy_spectral, total_energy_stress, total_particles, totals_2d)
from entropic_particles.specfun import CATALAN

S_MAX = 0.01


@pytest.fixture(scope="module")
def lorentz():
    return make_profile("lorentzian", {"S_max": S_MAX, "kappa": 1})


def test_beta_squared_beta_decay_example():
    s = 0.05
    p = make_profile("beta_decay", {"s": s, "kappa": 1})
    val = beta_squared(p, 0.5, 0.5)
    assert val == pytest.approx(s * s / (math.pi * math.expm1(2 * math.pi)), rel=1e-13)
    # s^2 * 5.95537615776758e-4 (independent arithmetic)
    assert val == pytest.approx(1.4888440394418948e-06, rel=1e-12)


def test_beta_squared_symmetric_and_vanishes_at_small_p(lorentz):
    p = np.array([0.1, 0.7, 2.0])
    q = np.array([1.3, 0.2, 0.9])
    np.testing.assert_allclose(beta_squared(lorentz, p, q), beta_squared(lorentz, q, p), rtol=1e-15)
    assert beta_squared(lorentz, 1e-12, 1.0) < 1e-10 * beta_squared(lorentz, 0.5, 1.0)
    with pytest.raises(ValueError):
        beta_squared(lorentz, 0.0, 1.0)


def test_beta_squared_charge_scaling():
    a = make_profile("beta_decay", {"s": 0.05, "e": 1.0})
    b = make_profile("beta_decay", {"s": 0.05, "e": 3.0})
    assert beta_squared(b, 0.3, 0.4) == pytest.approx(9 * beta_squared(a, 0.3, 0.4), rel=1e-15)


def test_harmonic_spectrum_concentrated_near_kappa():
    p = make_profile("harmonic_finite", {"s": 0.01, "n": 40})
    near = beta_squared(p, 0.5, 0.5)
    far = beta_squared(p, 2.5, 2.5)
    assert far < 1e-4 * near


def test_lorentzian_spectrum_values(lorentz):
    # frozen from an mpmath quadrature of (144/pi) p (w-p)/w^2 |S_w|^2 over w > p
    spec = particle_spectrum(lorentz, [1e-4, 0.5, 2.0], tol=1e-10)
    np.testing.assert_allclose(spec.N_p, [4.26581341866e-07, 7.84809474499e-04, 1.56293451851e-04],
                               rtol=1e-9)
    assert np.all(spec.N_p >= -spec.err)
    assert spec.cutoffs == (2.0, None)


def test_lorentzian_spectrum_vanishes_at_small_p(lorentz):
    spec = particle_spectrum(lorentz, [1e-6, 1e-5, 1e-4])
    assert np.all(np.diff(spec.N_p) > 0)
    assert spec.N_p[0] < 1e-5


def test_spectrum_first_moment_matches_energy(lorentz):
    grid = np.linspace(1e-4, 30, 1201)
    spec = particle_spectrum(lorentz, grid)
    assert spec.energy() == pytest.approx(total_energy_spectral(lorentz), rel=1e-4)


def test_harmonic_spectrum_large_n():
    s, n = 0.01, 60
    p = make_profile("harmonic_finite", {"s": s, "n": n})
    spec = particle_spectrum(p, [0.5, 1.5], tol=1e-9)
    # delta-function limit: 18 n s^2 / kappa at p = kappa/2, zero above kappa
    assert spec.N_p[0] == pytest.approx(18 * n * s * s, rel=2e-2)
    assert spec.N_p[1] < 2e-3 * spec.N_p[0]


def test_spectrum_parallel_matches_serial(lorentz):
    grid = np.linspace(0.1, 3, 9)
    a = particle_spectrum(lorentz, grid)
    b = particle_spectrum(lorentz, grid, workers=3)
    assert a.N_p.tobytes() == b.N_p.tobytes()


def test_lorentzian_totals(lorentz):
    n = total_particles(lorentz)
    e = total_energy_spectral(lorentz)
    assert n == pytest.approx(32 * S_MAX ** 2 / 3, rel=1e-8)
    assert e == pytest.approx(32 * S_MAX ** 2 / 3, rel=1e-8)
    assert total_energy_stress(lorentz) == pytest.approx(1.06667e-3, rel=1e-5)
    assert energy_per_quantum(lorentz) == pytest.approx(1.0, rel=1e-8)


def test_black_hole_totals():
    m = 0.1
    p = make_profile("black_hole_analog", {"M": m})
    t = compute_totals(p)
    assert t.E_spectral == pytest.approx(m, rel=1e-6)
    assert t.E_stress == pytest.approx(m, rel=1e-6)
    assert t.N_total == pytest.approx(768 * CATALAN / math.pi * m ** 4, rel=1e-6)
    assert t.energy_per_quantum == pytest.approx(math.pi / (768 * CATALAN * m ** 3), rel=1e-6)


def test_arctx_totals():
    v = 0.1
    p = make_profile("arctx", {"v": v, "kappa": 1})
    assert total_particles(p) == pytest.approx(4 * v * v / (3 * math.pi ** 2) * math.log(2), rel=1e-9)
    assert total_particles(p) == pytest.approx(9.3637e-4, rel=1e-4)
    assert total_energy_spectral(p) == pytest.approx(v * v / (9 * math.pi), rel=1e-9)
    assert total_energy_stress(p) == pytest.approx(3.53678e-4, rel=1e-5)


def test_harmonic_totals():
    s, n = 0.01, 10
    p = make_profile("harmonic_finite", {"s": s, "n": n})
    assert total_energy_stress(p) == pytest.approx(6 * n * s * s, rel=1e-12)
    # N sits just below its large-n asymptote 12 n s^2
    ratio = total_particles(p) / (12 * n * s * s)
    assert ratio == pytest.approx(0.989873, abs=2e-6)
    assert energy_per_quantum(p) == pytest.approx(0.5, rel=2e-2)


def test_beta_decay_stress_energy():
    s = 0.05
    p = make_profile("beta_decay", {"s": s, "kappa": 1, "e": 1})
    assert total_energy_stress(p) == pytest.approx(s * s / (72 * math.pi), rel=1e-10)
    assert total_energy_stress(p) == pytest.approx(1.10524e-5, rel=1e-5)
    e2 = make_profile("beta_decay", {"s": s, "e": 2.0})
    assert total_energy_stress(e2) == pytest.approx(4 * total_energy_stress(p), rel=1e-12)


def test_beta_decay_planck_form():
    p = make_profile("beta_decay", {"s": 0.05})
    w = np.geomspace(0.01, 5, 40)
    shape = emission_spectrum(p, w) * np.expm1(2 * np.pi * w)
    np.testing.assert_allclose(shape, shape[0], rtol=1e-12)
    # |S_w|^2 (e^{2 pi w} - 1) w = s^2/36
    assert shape[0] == pytest.approx(12 / math.pi * 0.05 ** 2 / 36, rel=1e-12)


def test_static_totals_are_zero():
    t = compute_totals(make_profile("static"))
    assert t.N_total == 0 and t.E_spectral == 0 and t.E_stress == 0
    assert t.energy_per_quantum is None
    assert any("undefined" in note for note in t.notes)
    assert math.isnan(energy_per_quantum(make_profile("static")))


def test_totals_2d_cross_check(lorentz):
    n2, e2 = totals_2d(lorentz)
    assert n2 == pytest.approx(total_particles(lorentz), rel=1e-7)
    assert e2 == pytest.approx(total_energy_spectral(lorentz), rel=1e-7)


def test_impure_profile_total_diverges():
    p = make_profile("beta_decay", {"s": 0.05})
    with pytest.raises(DivergenceError) as info:
        total_particles(p)
    assert info.value.divergence == "log"
    # an IR cutoff makes it finite; E converges without one
    assert math.isfinite(total_particles(p, ir_cutoff=1e-3))
    assert total_energy_spectral(p) == pytest.approx(total_energy_stress(p), rel=1e-6)
    t = compute_totals(p)
    assert t.N_total is None and "N_total" in t.divergences
    assert t.E_spectral is not None


def test_jump_profile_needs_uv_cutoff():
    p = make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1})
    with pytest.raises(DivergenceError):
        total_particles(p)
    with pytest.raises(DivergenceError):
        particle_spectrum(p, [0.5])
    with pytest.raises(DiscontinuityError):
        total_energy_stress(p)
    n10, n100 = total_particles(p, uv_cutoff=10), total_particles(p, uv_cutoff=100)
    assert n100 > n10 > 0


def test_regularization_required_for_unbounded_profiles():
    p = make_profile("uniform_semi_eternal", {"S0": 0.01})
    with pytest.raises(RegularizationRequired):
        particle_spectrum(p, [0.5])
    with pytest.raises(DivergenceError):
        total_energy_stress(p)


@pytest.mark.parametrize("kind", ["exp", "energy"])
def test_null_profiles_regularized_totals(kind):
    for name, params in [("constant", {"S0": 0.01}), ("uniform_eternal", {"S0": 0.01})]:
        n, e, limits = regularized_totals(make_profile(name, params), kind)
        assert n == 0.0 and e == 0.0
        assert all(lim.finite for lim in limits)


def test_instantaneous_values(lorentz):
    r = instantaneous(lorentz, 0.0)
    ds0 = -16 * S_MAX / (3 * math.sqrt(3))
    assert r.power == pytest.approx(6 / math.pi * ds0 ** 2, rel=1e-14)
    assert r.force == pytest.approx(0.0, abs=1e-18)
    # finite differences on S itself
    h = 1e-5
    fd = (lorentz(h) - lorentz(-h)) / (2 * h)
    assert fd == pytest.approx(ds0, rel=1e-8)


def test_instantaneous_temperature_eternal():
    kappa = 0.8
    r = instantaneous(make_profile("uniform_eternal", {"kappa": kappa}), 3.0)
    assert r.temperature == pytest.approx(kappa / (2 * math.pi), rel=1e-14)
    assert r.power == pytest.approx(6 / math.pi * (kappa / 6) ** 2, rel=1e-14)


def test_instantaneous_static_and_breaks():
    r = instantaneous(make_profile("static"), 1.0)
    assert (r.power, r.force, r.temperature) == (0.0, 0.0, 0.0)
    with pytest.raises(DiscontinuityError):
        instantaneous(make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1}), math.pi)
    with pytest.raises(DiscontinuityError):
        instantaneous(make_profile("harmonic_damped", {"s": 0.01, "n": 1}), 0.0)


def test_spectrum_grid_validation(lorentz):
    with pytest.raises(ValueError):
        particle_spectrum(lorentz, [0.0, 1.0])
    with pytest.raises(ValueError):
        particle_spectrum(lorentz, [1.0, 0.5])
