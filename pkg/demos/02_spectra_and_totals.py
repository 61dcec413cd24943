# %% [markdown]
# # Particle spectra and the two energy routes
#
# The pair density is |beta_pq|^2 = (144/pi) p q / w^2 |S_w|^2 with w = p + q.
# Integrating over q gives the spectrum N(p); the totals reduce to
#
#     N = (24/pi) int w |S_w|^2 dw,   E = (12/pi) int w^2 |S_w|^2 dw,
#
# and the energy can also be read off the time domain, E = (6/pi) int S'^2 dt.

# %%
import math

import numpy as np

from entropic_particles import (compute_totals, emission_spectrum, make_profile, particle_spectrum,
                                total_energy_stress, totals_2d)
from entropic_particles.specfun import CATALAN

# %% [markdown]
# ## Lorentzian: N = E = 32 S_max^2 / 3 at kappa = 1

# %%
lor = make_profile("lorentzian", {"S_max": 0.01})
tot = compute_totals(lor)
print(tot.N_total, tot.E_spectral, tot.E_stress, 32e-4 / 3)
print("double-integral cross-check:", totals_2d(lor))

# %%
grid = np.linspace(0.05, 6, 12)
spec = particle_spectrum(lor, grid)
for p, n, e in spec.rows():
    print(f"p={p:5.2f}  N(p)={n:.6e}  err={e:.1e}")

# %% [markdown]
# ## Black-hole analog
#
# The total energy equals the mass, and N = (768 C / pi) M^4 with C the
# Catalan constant.

# %%
bh = make_profile("black_hole_analog", {"M": 0.1})
tot = compute_totals(bh)
print("E_spectral:", tot.E_spectral, " E_stress:", tot.E_stress)
print("N_total:", tot.N_total, " closed form:", 768 * CATALAN / math.pi * 0.1 ** 4)

# %% [markdown]
# ## Beta decay: a one-dimensional Planck spectrum
#
# The emission spectrum times (exp(2 pi w / kappa) - 1) is flat.  The
# energy converges even though the count does not (the entropy never
# returns to zero).

# %%
beta = make_profile("beta_decay", {"s": 0.05})
w = np.geomspace(0.01, 5, 6)
print(emission_spectrum(beta, w) * np.expm1(2 * np.pi * w))
print("E_stress:", total_energy_stress(beta), " s^2/(72 pi):", 0.05 ** 2 / (72 * math.pi))
print(compute_totals(beta).divergences["N_total"]["divergence"])

# %% [markdown]
# ## Harmonic oscillations
#
# N approaches 12 n s^2 from below as the number of periods grows, while
# the stress energy is exactly 6 n s^2 kappa for any n.

# %%
for n in (1, 5, 10, 20):
    h = make_profile("harmonic_finite", {"s": 0.01, "n": n})
    t = compute_totals(h)
    print(f"n={n:2d}  N/(12 n s^2)={t.N_total / (12 * n * 1e-4):.6f}  "
          f"E_stress/(6 n s^2)={t.E_stress / (6 * n * 1e-4):.12f}")
