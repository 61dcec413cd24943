"""Exception types raised by the numerical pipeline.

The CLI maps these onto exit codes, so each class carries enough context
to build a machine-readable error object.
"""

from __future__ import annotations


class EntropicError(Exception):
    """Base class for all package errors."""

    def to_dict(self) -> dict:
        return {"type": type(self).__name__, "message": str(self)}


class ProfileError(EntropicError, ValueError):
    """Unknown catalog entry or invalid profile parameters."""


class ConvergenceError(EntropicError, RuntimeError):
    """Quadrature did not reach the requested tolerance within its budget."""

    def __init__(self, message: str, value=None, estimate: float | None = None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["error_estimate"] = self.estimate
        return d


class RegularizationRequired(EntropicError, ValueError):
    """The plain Fourier transform does not exist; use a regularized transform."""


class DivergenceError(EntropicError, ArithmeticError):
    """A requested total diverges (IR or UV) and no cutoff was supplied."""

    def __init__(self, message: str, quantity: str = "", divergence: str = "",
                 region: str = ""):
        super().__init__(message)
        self.quantity = quantity
        self.divergence = divergence
        self.region = region

    def to_dict(self) -> dict:
        d = super().to_dict()
        d.update(quantity=self.quantity, divergence=self.divergence, region=self.region)
        return d


class DiscontinuityError(EntropicError, ValueError):
    """A time-domain quantity needs a derivative at an entropy jump."""
