import math

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from entropic_particles import (beta_squared, make_profile, particle_spectrum, total_energy_spectral,
                                total_energy_stress, total_particles, transform)
from entropic_particles.expansion import beta_exact, beta_exact_modulus_sq

FAST = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])

pure_profiles = st.sampled_from([
    ("lorentzian", "S_max", {}),
    ("arctx", "v", {}),
    ("harmonic_finite", "s", {"n": 2}),
    ("harmonic_damped", "s", {"n": 1}),
])
amplitudes = st.floats(0.001, 0.1)
kappas = st.floats(0.3, 3.0)
freqs = st.floats(0.01, 6.0)


def _build(entry, amp, kappa):
    name, key, extra = entry
    return make_profile(name, {key: amp, "kappa": kappa, **extra})


@FAST
@given(pure_profiles, amplitudes, kappas)
def test_parseval(entry, amp, kappa):
    p = _build(entry, amp, kappa)
    assert total_energy_spectral(p) == pytest.approx(total_energy_stress(p), rel=1e-6)


@FAST
@given(pure_profiles, amplitudes, st.floats(0.05, 20.0))
def test_amplitude_quadratic(entry, amp, c):
    p = _build(entry, amp, 1.0)
    q = p.scaled(c)
    assert total_particles(q) == pytest.approx(c * c * total_particles(p), rel=1e-10)
    assert total_energy_spectral(q) == pytest.approx(c * c * total_energy_spectral(p), rel=1e-10)
    assert total_energy_stress(q) == pytest.approx(c * c * total_energy_stress(p), rel=1e-10)


@FAST
@given(st.sampled_from([("lorentzian", "S_max", {}), ("arctx", "v", {})]), amplitudes,
       st.floats(0.25, 4.0))
def test_time_rescaling(entry, amp, lam):
    p = _build(entry, amp, 1.0)
    q = p.rescaled(lam)
    assert total_particles(q) == pytest.approx(total_particles(p), rel=1e-6)
    assert total_energy_spectral(q) == pytest.approx(lam * total_energy_spectral(p), rel=1e-6)
    assert total_energy_stress(q) == pytest.approx(lam * total_energy_stress(p), rel=1e-6)


@FAST
@given(pure_profiles, amplitudes, kappas, freqs)
def test_reality_symmetry(entry, amp, kappa, w):
    p = _build(entry, amp, kappa)
    assert transform(p, -w) == np.conj(transform(p, w))


@FAST
@given(pure_profiles, amplitudes, freqs, freqs)
def test_beta_squared_symmetric_nonnegative(entry, amp, pf, qf):
    p = _build(entry, amp, 1.0)
    a, b = beta_squared(p, pf, qf), beta_squared(p, qf, pf)
    assert a >= 0
    assert a == pytest.approx(b, rel=1e-14, abs=1e-300)


@settings(max_examples=10, deadline=None)
@given(pure_profiles, amplitudes)
def test_spectrum_nonnegative(entry, amp):
    p = _build(entry, amp, 1.0)
    spec = particle_spectrum(p, np.geomspace(0.01, 8, 8))
    assert np.all(spec.N_p >= -spec.err)


@FAST
@given(st.floats(0.01, 3.0), st.floats(0.01, 3.0), st.floats(0.0, 0.9))
def test_expansion_modulus_identity(p, q, s):
    exact = beta_exact(p, q, s).modulus_sq
    assert exact == pytest.approx(beta_exact_modulus_sq(p, q, s), rel=1e-10, abs=1e-300)


@FAST
@given(st.floats(-0.2, 0.2).filter(lambda s: abs(s) > 1e-6), st.floats(0.2, 5.0), freqs)
def test_beta_decay_planck_ratio(s, kappa, w):
    # |S_w|^2 w (e^{2 pi w/kappa} - 1) = s^2 / (36 kappa^2) for every w
    p = make_profile("beta_decay", {"s": s, "kappa": kappa})
    lhs = abs(transform(p, w)) ** 2 * w * math.expm1(2 * math.pi * w / kappa)
    assert lhs == pytest.approx(s * s / (36 * kappa), rel=1e-10)
