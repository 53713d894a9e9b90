"""Parameter containers and shared configuration.

The index ``alpha`` lives in (0, 1).  Several derived quantities recur
throughout the package:

* ``beta = alpha / (1 - alpha)``, the exponent of the inverse-power
  transformation ``x -> x**(-1/beta)``,
* ``t0 = alpha**(1/(1-alpha))``, the minimizer of ``t - t**alpha``,
* ``delta = (1 - alpha) * alpha**(alpha/(1-alpha))``, the depth of that
  minimum, which controls every exponential growth rate in the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# Outside this band the quadrature/series routing degrades; routines warn.
ALPHA_SAFE_BAND = (0.05, 0.95)


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


@dataclass(frozen=True)
class StableParams:
    """Index pair for the positive stable density family.

    Parameters
    ----------
    alpha : float
        Stability index, in (0, 1).
    gamma : float, optional
        Skew-like second index of the two-parameter density family, in
        [-1, 1].  Defaults to ``alpha``, the value relevant for the
        one-sided density itself.
    """

    alpha: float
    gamma: float = None  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        gamma = self.alpha if self.gamma is None else float(self.gamma)
        if not -1.0 <= gamma <= 1.0:
            raise DomainError(f"gamma must lie in [-1, 1], got {gamma}")
        object.__setattr__(self, "gamma", gamma)

    @property
    def beta(self) -> float:
        return self.alpha / (1.0 - self.alpha)

    @property
    def t0(self) -> float:
        """Minimizer of t - t**alpha on (0, inf)."""
        return self.alpha ** (1.0 / (1.0 - self.alpha))

    @property
    def delta(self) -> float:
        """Value of t**alpha - t at its maximum; growth rate constant."""
        a = self.alpha
        return (1.0 - a) * a ** (a / (1.0 - a))

    @property
    def curvature(self) -> float:
        """Second derivative of t - t**alpha at t0."""
        a = self.alpha
        return a * (1.0 - a) * self.t0 ** (a - 2.0)

    def in_safe_band(self) -> bool:
        return ALPHA_SAFE_BAND[0] <= self.alpha <= ALPHA_SAFE_BAND[1]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances shared by the quadrature-backed evaluators.

    ``rel_tol`` is the target relative error of a single quadrature;
    routines that combine several quadratures may lose a modest factor
    over it.  ``truncation_tail_tol`` bounds the mass discarded when an
    infinite range is cut at a finite point by an explicit envelope.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 200
    truncation_tail_tol: float = 1e-16

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol < 0:
            raise DomainError("tolerances must be positive")


DEFAULT_QUAD = QuadratureConfig()


def log_spaced(lo: float, hi: float, n: int) -> np.ndarray:
    """Geometric grid, endpoints included."""
    if not (0 < lo < hi) or n < 2:
        raise DomainError("need 0 < lo < hi and n >= 2")
    return np.geomspace(lo, hi, int(n))
