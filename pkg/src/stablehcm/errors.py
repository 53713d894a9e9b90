"""Exception hierarchy for numerical failures.

Every failure mode that callers may want to catch gets its own class.
All inherit from StableHcmError so a bare ``except StableHcmError``
catches anything raised by this package on purpose.
"""

from __future__ import annotations


class StableHcmError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(StableHcmError, ValueError):
    """Argument outside the mathematical domain of the routine."""


class QuadratureError(StableHcmError):
    """A quadrature failed to reach the requested tolerance.

    Parameters
    ----------
    message : str
        Human-readable account of what failed.
    estimate : float or complex, optional
        Best available value, for diagnostic use only.
    abs_error : float, optional
        Bound on the absolute error of ``estimate``.  Cancellation
        failures are relative failures: the estimate may still be
        absolutely accurate, and callers integrating against a weight
        can accept it when this bound is below their own floor.
    """

    def __init__(self, message, estimate=None, abs_error=None):
        super().__init__(message)
        self.estimate = estimate
        self.abs_error = abs_error


class CrossValidationError(StableHcmError):
    """Two independent evaluation routes disagree beyond tolerance."""


class RefinementError(StableHcmError):
    """Adaptive grid refinement hit its budget without converging."""


class RepresentationError(StableHcmError):
    """A structural representation (integral form, interpolant) is invalid."""


class DivergenceError(StableHcmError):
    """A series or iteration diverged where convergence was required."""


class ContinuationError(StableHcmError):
    """Path continuation (curve tracing) lost its root."""


class EnvelopeQualityError(StableHcmError):
    """A certified envelope is too loose to be useful."""


class ConstantResolutionError(StableHcmError):
    """An internally fitted constant could not be pinned down reliably."""


class PrecisionWarning(UserWarning):
    """Result returned, but with degraded accuracy."""
