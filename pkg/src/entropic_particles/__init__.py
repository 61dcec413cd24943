"""Particle creation from time-dependent entanglement entropy.

A moving mirror with small velocity v(t) carries entropy S(t) = -v/6.  The
package turns a catalog (or user-supplied) entropy history into its
spectral entropy S_w, the pair density |beta_pq|^2, the particle spectrum
N(p), the totals N and E, and infrared/ultraviolet convergence diagnostics.
"""

from .errors import (ConvergenceError, DiscontinuityError, DivergenceError, EntropicError,
                     ProfileError, RegularizationRequired)
from .profiles import (CATALOG, EntropyProfile, TrajectoryProfile, make_profile,
                       tabulated_profile, trajectory_from_entropy, validate_profile)
from .fourier import (RegularizationScheme, SpectralEntropy, regularized_limit, transform,
                      transform_regularized)
from .spectra import (beta_squared, compute_totals, emission_spectrum, energy_per_quantum,
                      instantaneous, particle_spectrum, regularized_particle_spectrum,
                      regularized_totals, total_energy_spectral, total_energy_stress,
                      total_particles, totals_2d)
from .diagnostics import classify
from .expansion import beta_exact, beta_series, series_residual_scaling

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "EntropicError", "ProfileError", "ConvergenceError", "RegularizationRequired",
    "DivergenceError", "DiscontinuityError",
    "CATALOG", "EntropyProfile", "TrajectoryProfile", "make_profile", "tabulated_profile",
    "trajectory_from_entropy", "validate_profile",
    "RegularizationScheme", "SpectralEntropy", "regularized_limit", "transform",
    "transform_regularized",
    "beta_squared", "compute_totals", "emission_spectrum", "energy_per_quantum", "instantaneous",
    "particle_spectrum", "regularized_particle_spectrum", "regularized_totals",
    "total_energy_spectral", "total_energy_stress", "total_particles", "totals_2d",
    "classify",
    "beta_exact", "beta_series", "series_residual_scaling",
]
