"""Checked wrappers around scipy quadrature plus series acceleration.

scipy's ``quad`` reports trouble through ``ier`` codes and message
strings; silently accepting those results is how wrong numbers leak
into downstream certificates.  ``quad_checked`` turns any non-clean
outcome into :class:`~stablehcm.errors.QuadratureError` carrying the
best estimate, so callers can decide whether a degraded value is
usable.
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate

from .errors import DivergenceError, QuadratureError
from .params import DEFAULT_QUAD, QuadratureConfig

__all__ = [
    "quad_checked",
    "quad_complex",
    "alternating_panel_sum",
    "truncation_point",
]


def quad_checked(
    f,
    a,
    b,
    config: QuadratureConfig = DEFAULT_QUAD,
    rel_tol=None,
    abs_tol=None,
    points=None,
    limit=None,
):
    """Integrate ``f`` on [a, b] and verify the reported error.

    Returns
    -------
    value : float
    err : float
        scipy's error estimate.

    Raises
    ------
    QuadratureError
        If scipy signals non-convergence, or the reported error exceeds
        ``rel_tol * |value| + abs_tol``.
    """
    rel_tol = config.rel_tol if rel_tol is None else rel_tol
    abs_tol = config.abs_tol if abs_tol is None else abs_tol
    limit = config.max_subdivisions if limit is None else limit
    # points= is only legal for finite intervals in scipy.
    if points is not None and (np.isinf(a) or np.isinf(b)):
        points = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            f,
            a,
            b,
            epsabs=abs_tol,
            epsrel=rel_tol,
            limit=limit,
            points=points,
            full_output=1,
        )
    value, err = out[0], out[1]
    ier = out[2].get("ier", 0) if len(out) > 2 and isinstance(out[2], dict) else 0
    message = out[3] if len(out) > 3 else ""
    if len(out) > 3 and ier not in (0,):
        # ier is absent from the info dict on success; any 4th element
        # means scipy attached an explanation of a convergence problem.
        raise QuadratureError(
            f"quad did not converge on [{a}, {b}]: {message}", estimate=value
        )
    tol = rel_tol * abs(value) + abs_tol
    if err > max(tol, 10 * abs_tol):
        raise QuadratureError(
            f"quad error estimate {err:.3e} exceeds tolerance {tol:.3e} "
            f"on [{a}, {b}]",
            estimate=value,
        )
    return value, err


def quad_complex(f, a, b, config: QuadratureConfig = DEFAULT_QUAD, **kw):
    """Complex-valued integral via separate real and imaginary quads.

    The two parts get the same absolute tolerance; the relative
    tolerance is checked against the combined modulus, since either
    part alone may cross zero.
    """
    rel_tol = kw.pop("rel_tol", config.rel_tol)
    abs_tol = kw.pop("abs_tol", config.abs_tol)
    re, re_err = _quad_part(lambda t: f(t).real, a, b, config, rel_tol, abs_tol, kw)
    im, im_err = _quad_part(lambda t: f(t).imag, a, b, config, rel_tol, abs_tol, kw)
    value = complex(re, im)
    err = float(np.hypot(re_err, im_err))
    tol = rel_tol * abs(value) + abs_tol
    if err > max(tol, 10 * abs_tol):
        raise QuadratureError(
            f"complex quad error {err:.3e} exceeds tolerance {tol:.3e}",
            estimate=value,
        )
    return value, err


def _quad_part(f, a, b, config, rel_tol, abs_tol, kw):
    # Each part is checked only on absolute error here; the caller
    # rechecks relative error on the modulus.
    try:
        return quad_checked(
            f, a, b, config=config, rel_tol=rel_tol, abs_tol=abs_tol, **kw
        )
    except QuadratureError as exc:
        if exc.estimate is None:
            raise
        return exc.estimate, abs_tol  # salvage: caller's check still applies


def alternating_panel_sum(panel_values, rel_tol=1e-12, min_tail=6):
    """Sum panel integrals whose signs eventually alternate.

    Leading panels are added directly; once strict sign alternation
    sets in, the remaining tail is resummed with repeated pairwise
    (Euler) averaging, which converges for the slowly decaying
    alternating tails produced by oscillatory integrands.

    Parameters
    ----------
    panel_values : sequence of float
        Consecutive panel integrals, ordered.
    rel_tol : float
        Target for the acceleration's internal consistency.
    min_tail : int
        Smallest number of trailing panels handed to the accelerator.

    Raises
    ------
    DivergenceError
        If the accelerated tail fails its internal consistency check.
    """
    v = np.asarray(panel_values, dtype=float)
    if v.size == 0:
        return 0.0
    signs = np.sign(v)
    # Find the start of the longest strictly alternating suffix.
    start = v.size
    for i in range(v.size - 1, 0, -1):
        if signs[i] != 0 and signs[i] == -signs[i - 1]:
            start = i - 1
        else:
            break
    if v.size - start < min_tail:
        return float(v.sum())
    head = float(v[:start].sum())
    tail = v[start:]
    accel, spread = _euler_transform(tail)
    scale = abs(head) + abs(accel) + 1e-300
    if spread > max(rel_tol * scale, 1e-15 * scale):
        raise DivergenceError(
            f"alternating tail acceleration spread {spread:.3e} too large"
        )
    return head + accel


def _euler_transform(tail):
    """Repeated pairwise means of partial sums; returns (value, spread)."""
    s = np.cumsum(tail)
    last_rows = [s[-1]]
    while s.size > 1:
        s = 0.5 * (s[1:] + s[:-1])
        last_rows.append(s[-1])
    best = last_rows[-1]
    comparison = last_rows[-3:] if len(last_rows) >= 3 else last_rows
    spread = max(comparison) - min(comparison)
    return float(best), float(spread)


def truncation_point(log_envelope, tol, lo, hi):
    """Smallest T in [lo, hi] with exp(log_envelope(T)) <= tol.

    ``log_envelope`` must be decreasing on [lo, hi].  Used to cut
    infinite integration ranges under an explicit dominating bound.
    Returns ``hi`` if even the endpoint fails, which callers treat as
    "integrate the whole window".
    """
    log_tol = np.log(tol)
    if log_envelope(lo) <= log_tol:
        return lo
    if log_envelope(hi) > log_tol:
        return hi
    a, b = lo, hi
    for _ in range(200):
        mid = 0.5 * (a + b)
        if log_envelope(mid) <= log_tol:
            b = mid
        else:
            a = mid
        if b - a <= 1e-9 * (1 + b):
            break
    return b
