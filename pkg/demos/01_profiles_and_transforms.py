# %% [markdown]
# # Entropy profiles and their spectral entropy
#
# A mirror moving with small velocity v(t) carries entanglement entropy
# S(t) = -v/6.  Everything downstream starts from the Fourier transform
#
#     S_w = (2 pi)^(-1/2) int S(t) exp(-i w t) dt.
#
# This notebook builds a few catalog profiles, checks the entropy/trajectory
# duality and compares closed-form transforms against the quadrature engine.

# %%
import numpy as np

from entropic_particles import (CATALOG, make_profile, trajectory_from_entropy, transform,
                                validate_profile)

for name, (_, required, optional) in CATALOG.items():
    print(f"{name:24s} required={list(required)} optional={optional}")

# %% [markdown]
# ## The Lorentzian pulse
#
# The amplitude is chosen so that the peak |S| equals S_max, reached at t = 1/sqrt(3).

# %%
lor = make_profile("lorentzian", {"S_max": 0.01, "kappa": 1.0})
t = np.linspace(-4, 4, 9)
print(np.round(lor(t), 6))
print("peak |S|:", abs(lor(1 / np.sqrt(3))))

report = validate_profile(lor)
print(report.non_relativistic, report.asymptotic_rest, report.purity_defect)

# %% [markdown]
# ## Duality: v = -6 S and z = int v dt
#
# The trajectory carries the same information; -v/6 gives back S exactly.

# %%
traj = trajectory_from_entropy(lor)
grid = np.linspace(-8, 8, 1000)
print("max |S - (-v/6)|:", np.max(np.abs(traj.entropy(grid) - lor(grid))))
h = 1e-5
fd = (traj.z_of_t(grid + h) - traj.z_of_t(grid - h)) / (2 * h)
print("max |dz/dt - v|:", np.max(np.abs(fd - traj.v_of_t(grid))))

# %% [markdown]
# ## Closed forms versus quadrature
#
# `force_numeric=True` bypasses the analytic transform, so the two columns
# come from independent routes.

# %%
for name, params in [("lorentzian", {"S_max": 0.01}), ("black_hole_analog", {"M": 0.1}),
                     ("harmonic_finite", {"s": 0.01, "n": 3}), ("arctx", {"v": 0.1})]:
    p = make_profile(name, params)
    w = 0.7 / p.time_scale
    a, b = transform(p, w), transform(p, w, force_numeric=True)
    print(f"{name:20s} w={w:9.4g}  analytic={a:.10e}  numeric={b:.10e}  rel={abs(a - b) / abs(a):.1e}")

# %% [markdown]
# The harmonic transform has a removable singularity at w = kappa, where it
# equals -i sqrt(pi/2) n s / kappa.

# %%
harm = make_profile("harmonic_finite", {"s": 0.01, "n": 3})
for w in (1 - 1e-6, 1.0, 1 + 1e-6):
    print(w, transform(harm, w))
print("expected:", -1j * np.sqrt(np.pi / 2) * 3 * 0.01)
