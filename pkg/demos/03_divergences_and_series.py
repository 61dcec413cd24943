# %% [markdown]
# # Divergences, regulators and the small-speed series
#
# Profiles that do not return to rest need a regulator before a transform
# exists; jumps in the entropy make the count grow with the UV cutoff.

# %%
import numpy as np

from entropic_particles import (DivergenceError, classify, make_profile, regularized_particle_spectrum,
                                regularized_totals, total_particles)
from entropic_particles.diagnostics import measured_ir_amplitude, purity_defect
from entropic_particles.expansion import beta_exact, beta_series, series_residual_scaling

# %% [markdown]
# ## Null profiles
#
# Constant entropy and eternal uniform acceleration radiate nothing once the
# regulator is removed, under either damping scheme.

# %%
for name in ("constant", "uniform_eternal"):
    for kind in ("exp", "energy"):
        n, e, _ = regularized_totals(make_profile(name, {"S0": 0.01}), kind)
        print(f"{name:16s} {kind:6s} N={n} E={e}")

# %% [markdown]
# ## Semi-eternal acceleration
#
# Starting the acceleration at a finite time leaves a nonzero limit spectrum.
# Its small-p behaviour decides whether the count converges.

# %%
semi = make_profile("uniform_semi_eternal", {"S0": 0.01})
spec, limits = regularized_particle_spectrum(semi, [0.1, 0.5, 1.0])
print(spec.N_p)
print("18 S0^2 / (5 pi^2 p^3):", 18e-4 / (5 * np.pi ** 2 * spec.p ** 3))
try:
    regularized_totals(semi)
except DivergenceError as exc:
    print("total:", exc)

# %% [markdown]
# ## Impurity and the infrared step law
#
# A net entropy change dS forces w |S_w| -> |dS| / sqrt(2 pi) as w -> 0.

# %%
beta = make_profile("beta_decay", {"s": 0.05})
print(purity_defect(beta), measured_ir_amplitude(beta))
rep = classify(beta)
print(rep.gamma_ir, rep.n_convergent, rep.e_convergent)

# %% [markdown]
# ## Entropy jumps
#
# The discontinuous cosine has |S_w| ~ 1/w, so N grows like ln(Lambda).

# %%
disc = make_profile("harmonic_discontinuous", {"s": 0.01, "n": 1})
lam = np.array([10.0, 100.0, 1000.0, 10000.0])
n = np.array([total_particles(disc, uv_cutoff=x) for x in lam])
print(n)
print("increments per decade:", np.diff(n))

# %% [markdown]
# ## Small-speed series for the beta coefficient
#
# Truncating after the s^(m+1) term leaves a residual of order s^(m+2).

# %%
exact = beta_exact(0.3, 0.2, 0.1).value
for m in (1, 2, 4, 6):
    approx = beta_series(0.3, 0.2, 0.1, m).value
    print(m, abs(approx - exact) / abs(exact))
for fit in series_residual_scaling(0.3, 0.2):
    print(f"order {fit.order}: slope {fit.slope:.3f} (expected {fit.expected})")
