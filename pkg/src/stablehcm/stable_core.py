"""Evaluation of the positive stable density family and its power transform.

The family g_{alpha,gamma} is defined by the oscillatory integral

    g_{alpha,gamma}(r) = (1/pi) * int_0^inf exp(-r*t - t**alpha*cos(pi*gamma))
                                  * sin(t**alpha * sin(pi*gamma)) dt,

a probability density when gamma == alpha, a signed function otherwise.
The central derived object is G_alpha, the density of S**(-beta) where
S follows the one-sided stable law with Laplace exponent lambda**alpha
and beta = alpha/(1-alpha):

    G_alpha(x) = beta**-1 * x**(-1/alpha) * g_alpha(x**(-1/beta)).

Every quantity here is computable three ways: convergent power series
(entire in the relevant variable, usable while the terms' cancellation
stays within double precision), panel quadrature between the zeros of
the oscillating factor, and, deep in the exponentially small tail, a
steepest-descent contour handled by the `saddle` module.  Routing picks
the cheapest representation whose error model meets the tolerance, and
the mid range cross-validates two independent routes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import (
    CrossValidationError,
    DomainError,
    PrecisionWarning,
    QuadratureError,
)
from .params import DEFAULT_QUAD, QuadratureConfig, StableParams
from .quadrature import alternating_panel_sum, quad_checked, quad_complex

__all__ = [
    "eval_density",
    "eval_tail",
    "eval_G_real",
    "eval_G_complex",
    "mixture_identity_residual",
    "half_stable_mixture",
    "cauchy_family_density",
    "large_x_correction",
    "log_density_bound",
]

_EPS = float(np.finfo(float).eps)

# Routing thresholds.  _DEPTH_CONTOUR is the exponent delta*x beyond
# which both the direct and the transformed quadrature lose too many
# digits to subtractive cancellation and the contour route takes over.
_DEPTH_CONTOUR = 8.0
_DEPTH_CONTOUR_COMPLEX = 16.0
_MAX_PANELS = 4000
_OVERFLOW_EXP = 690.0


def _sinpi(x: float) -> float:
    # exact zeros at integers; plain sin(pi*x) returns ~1e-16 there
    if x == math.floor(x):
        return 0.0
    return math.sin(math.pi * x)


def _cospi(x: float) -> float:
    if 2.0 * x == math.floor(2.0 * x) and x != math.floor(x):
        return 0.0
    return math.cos(math.pi * x)


# ---------------------------------------------------------------------------
# Convergent series.  All series below are entire in their expansion
# variable; the only numerical limit is the size of the largest term
# relative to the sum (tracked as `depth`).

@dataclass(frozen=True)
class SeriesResult:
    value: complex
    converged: bool
    depth: float
    n_terms: int

    def good(self, cfg: QuadratureConfig) -> bool:
        budget = cfg.rel_tol / (8.0 * _EPS)
        return self.converged and self.depth <= budget

    @property
    def rel_error(self) -> float:
        return 4.0 * _EPS * self.depth

    @property
    def abs_error(self) -> float:
        if not math.isfinite(self.depth) or self.depth == 0.0:
            return abs(self.value) * 4.0 * _EPS
        return self.rel_error * abs(self.value)


def _tail_converged(log_mags, floor):
    """True when the last few magnitudes are negligible and decreasing."""
    if log_mags.size < 4:
        return False
    tail = log_mags[-3:]
    return bool(np.all(np.diff(tail) < 0) and tail[-1] < floor)


def _grow_series(log_mag_fn, phase_fn, max_terms):
    """Sum sum_n phase(n)*exp(log_mag(n)) for n = 1.. until the terms die.

    Grows the term range in blocks; convergence means the running
    magnitudes dropped 85 e-folds below the largest one seen.
    """
    n_hi = 0
    log_mags = np.empty(0)
    phases = np.empty(0, dtype=complex)
    while n_hi < max_terms:
        n_new = np.arange(n_hi + 1, min(n_hi + 60, max_terms) + 1, dtype=float)
        log_mags = np.concatenate([log_mags, log_mag_fn(n_new)])
        phases = np.concatenate([phases, phase_fn(n_new)])
        n_hi = int(n_new[-1])
        if _tail_converged(log_mags, log_mags.max() - 85.0):
            break
    converged = _tail_converged(log_mags, log_mags.max() - 85.0)
    keep = log_mags > log_mags.max() - 700.0
    mags = np.exp(log_mags[keep])
    total = complex((mags * phases[keep]).sum())
    max_mag = float(mags.max(initial=0.0))
    if total == 0.0:
        depth = math.inf if max_mag > 0 else 0.0
    else:
        depth = max_mag / abs(total)
    return SeriesResult(total, converged, depth, n_hi)


def _alternating_sign(n):
    k = np.rint(n).astype(int)
    return np.where(k % 2 == 1, 1.0, -1.0)


def _density_series(alpha, gamma, r, max_terms=300):
    """Large-r series of g_{alpha,gamma}: Gamma(n*a+1)sin(n*pi*g)/n! r^(-n*a-1)."""
    log_r = math.log(r)

    def log_mag(n):
        return gammaln(n * alpha + 1.0) - gammaln(n + 1.0) - (n * alpha + 1.0) * log_r

    def phase(n):
        return _alternating_sign(n) * np.sin(np.pi * gamma * n) / math.pi + 0j

    return _grow_series(log_mag, phase, max_terms)


def _tail_series(alpha, gamma, x, max_terms=300):
    """Large-x series of the upper tail integral of g_{alpha,gamma}."""
    log_x = math.log(x)

    def log_mag(n):
        return gammaln(n * alpha) - gammaln(n + 1.0) - n * alpha * log_x

    def phase(n):
        return _alternating_sign(n) * np.sin(np.pi * gamma * n) / math.pi + 0j

    return _grow_series(log_mag, phase, max_terms)


def _G_series(alpha, z, max_terms=300):
    """Small-argument series of G_alpha on the cut plane.

    G(z) = (pi*beta)^-1 z^-alpha sum_{n>=1} (-1)^(n-1) sin(n pi alpha)
           Gamma(n alpha + 1)/n! z^((1-alpha)(n-1)),
    principal powers; entire in z^(1-alpha).
    """
    beta = alpha / (1.0 - alpha)
    log_z = np.log(complex(z))

    def log_mag(n):
        return (
            gammaln(n * alpha + 1.0)
            - gammaln(n + 1.0)
            + (1.0 - alpha) * (n - 1.0) * log_z.real
        )

    def phase(n):
        rot = np.exp(1j * (1.0 - alpha) * (n - 1.0) * log_z.imag)
        return _alternating_sign(n) * np.sin(np.pi * alpha * n) * rot

    res = _grow_series(log_mag, phase, max_terms)
    prefactor = np.exp(-alpha * log_z) / (math.pi * beta)
    return SeriesResult(
        complex(prefactor * res.value), res.converged, res.depth, res.n_terms
    )


# ---------------------------------------------------------------------------
# Oscillatory panel quadrature.  After the substitution u = t**alpha every
# integrand here takes the shape
#
#     exp(-decay*u**q - c*u) * sin(s*u) * u**p,        q = 1/alpha >= 1,
#
# whose sine factor has equally spaced zeros u_k = k*pi/s.  Panels between
# consecutive zeros alternate in sign; their sum is accelerated by repeated
# averaging once strict alternation sets in, and the range is truncated
# where the explicit envelope drops below the truncation tolerance.


def _envelope_peak_and_cut(phi, tail_tol, lo=1e-12):
    """Max of the log-envelope phi and the cut point where it is spent.

    phi maps float arrays to float arrays and must tend to -inf at +inf.
    Returns (phi_max, u_cut).
    """

    def phi1(u):
        return float(phi(np.array([u]))[0])

    hi = 1.0
    grid = np.geomspace(lo, hi, 400)
    vals = phi(grid)
    i_max = int(np.argmax(vals))
    phi_max = float(vals[i_max])
    for _ in range(60):
        grid = np.geomspace(lo, hi, 400)
        vals = phi(grid)
        i_max = int(np.argmax(vals))
        phi_max = float(vals[i_max])
        if phi1(hi) < phi_max - 80.0:
            break
        hi *= 8.0
    target = phi_max + math.log(tail_tol)
    a = float(grid[i_max])
    b = hi
    for _ in range(20):
        if phi1(b) - math.log1p(b) <= target:
            break
        b *= 4.0
    for _ in range(80):
        mid = math.sqrt(a * b)
        if phi1(mid) - math.log1p(mid) <= target:
            b = mid
        else:
            a = mid
        if b / a < 1.0 + 1e-6:
            break
    return phi_max, b


def _sin_ratio(s, u):
    # sin(s*u)/u, stable at u -> 0
    su = s * u
    if abs(su) < 1e-8:
        return s * (1.0 - su * su / 6.0)
    return math.sin(su) / u


def _panel_cancellation(panels, cfg, context):
    """Combine signed panels; raise (with salvage fields) past depth budget."""
    total = alternating_panel_sum(panels, rel_tol=cfg.rel_tol)
    max_panel = max((abs(v) for v in panels), default=0.0)
    if total == 0.0:
        return 0.0, 0.0
    depth = max_panel / abs(total)
    est = depth * (cfg.rel_tol + 4.0 * _EPS)
    if est > 1e-5:
        raise QuadratureError(
            f"{context}: cancellation depth {depth:.2e} leaves estimated "
            f"relative error {est:.2e}",
            estimate=total,
            abs_error=max_panel * (cfg.rel_tol + 4.0 * _EPS) * math.sqrt(len(panels)),
        )
    if est > 50.0 * cfg.rel_tol:
        warnings.warn(
            f"{context}: accuracy degraded to ~{est:.1e} relative error",
            PrecisionWarning,
            stacklevel=4,
        )
    return total, est


def _paneled_quad(f, edges, scale, span, cfg, complex_valued=False):
    """Quadrature over consecutive [edges] windows with salvage of panels."""
    panels = []
    quad_fn = quad_complex if complex_valued else quad_checked
    for a, b in zip(edges[:-1], edges[1:]):
        abs_tol = max(cfg.abs_tol, scale * (b - a) / max(span, 1.0) * 1e-16)
        try:
            val, _ = quad_fn(f, a, b, config=cfg, abs_tol=abs_tol)
        except QuadratureError as exc:
            if exc.estimate is None:
                raise
            val = exc.estimate
        panels.append(val)
    return panels


def _osc_sine_quad(decay, q, c, s, p, cfg):
    """integral_0^inf exp(-decay*u**q - c*u) * sin(s*u) * u**p du.

    Requires decay > 0, s > 0, and p >= -1 (at p == -1 the integrand
    sin(s*u)*u**p is bounded).  Returns (value, est_rel_err).
    """
    if decay <= 0 or s <= 0 or p < -1.0:
        raise DomainError("oscillatory engine needs decay>0, s>0, p>=-1")

    if p == -1.0:
        # |sin(s u)/u| <= min(s, 1/u)
        def phi(u):
            u = np.asarray(u, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                cap = np.minimum(math.log(s) + np.log(u), 0.0)
                return -decay * u**q - c * u + cap - np.log(u)

        def f(u):
            if u <= 0.0:
                return s
            return math.exp(-decay * u**q - c * u) * _sin_ratio(s, u)

    else:

        def phi(u):
            u = np.asarray(u, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore"):
                extra = p * np.log(u) if p != 0.0 else 0.0
                return -decay * u**q - c * u + extra

        def f(u):
            if u <= 0.0:
                return 0.0
            return math.exp(-decay * u**q - c * u + p * math.log(u)) * math.sin(s * u)

    phi_max, u_cut = _envelope_peak_and_cut(phi, cfg.truncation_tail_tol)
    if phi_max > _OVERFLOW_EXP:
        raise QuadratureError(
            f"integrand envelope exp({phi_max:.1f}) overflows double precision"
        )
    n_zeros = int(s * u_cut / math.pi)
    if n_zeros > _MAX_PANELS:
        raise QuadratureError(f"{n_zeros} oscillation panels exceed budget")
    edges = [k * math.pi / s for k in range(n_zeros + 1)]
    if edges[-1] < u_cut:
        edges.append(u_cut)
    scale = math.exp(min(phi_max, 690.0))
    panels = _paneled_quad(f, edges, scale, u_cut, cfg)
    return _panel_cancellation(panels, cfg, "power-variable quadrature")


def _osc_sine_quad_t(r, c, s, alpha, cfg):
    """Same integral in the original variable: exp(-r t - c t^a) sin(s t^a) dt."""

    def phi(t):
        t = np.asarray(t, dtype=float)
        return -r * t - c * t**alpha

    phi_max, t_cut = _envelope_peak_and_cut(phi, cfg.truncation_tail_tol)
    if phi_max > _OVERFLOW_EXP:
        raise QuadratureError("integrand envelope overflows double precision")
    n_zeros = int((s * t_cut**alpha) / math.pi)
    if n_zeros > _MAX_PANELS:
        raise QuadratureError(f"{n_zeros} oscillation panels exceed budget")
    edges = [(k * math.pi / s) ** (1.0 / alpha) for k in range(n_zeros + 1)]
    if edges[-1] < t_cut:
        edges.append(t_cut)

    def f(t):
        if t <= 0.0:
            return 0.0
        ta = t**alpha
        return math.exp(-r * t - c * ta) * math.sin(s * ta)

    scale = math.exp(min(phi_max, 690.0))
    panels = _paneled_quad(f, edges, scale, t_cut, cfg)
    return _panel_cancellation(panels, cfg, "direct-variable quadrature")


# ---------------------------------------------------------------------------
# Density and tail.


def log_density_bound(alpha: float, r: float) -> float:
    """Log of a small-r upper estimate for the one-sided density g_alpha(r).

    The density vanishes like exp(-delta * r**-beta) as r -> 0; this
    returns the log of three times the leading saddle-point form.
    Intended for negligibility decisions, not as a certified bound.
    """
    p = StableParams(alpha)
    power = (alpha - 2.0) / (2.0 * (1.0 - alpha))
    c_inf = (2.0 * math.pi * p.beta) ** -0.5 * alpha ** (p.beta / 2.0)
    return (
        math.log(3.0 * p.beta * c_inf)
        + power * math.log(r)
        - p.delta * r ** (-p.beta)
    )


def _salvage(exc: QuadratureError, abs_floor: float, prefactor: float):
    """Accept a cancellation-failure estimate when absolutely negligible."""
    if (
        abs_floor > 0.0
        and exc.estimate is not None
        and exc.abs_error is not None
        and exc.abs_error / prefactor <= abs_floor
    ):
        return exc.estimate
    raise exc


def eval_density(
    params: StableParams,
    r: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    substitution: str = "auto",
    abs_floor: float = 0.0,
) -> float:
    """Density family value g_{alpha,gamma}(r).

    For gamma == alpha this is the one-sided stable probability density.
    For other gamma in [-1, 1] the value may be negative; the function is
    odd in gamma and identically zero at gamma in {-1, 0, 1}.

    Parameters
    ----------
    params : StableParams
        Carries (alpha, gamma).
    r : float
        Evaluation point, > 0.
    cfg : QuadratureConfig
    substitution : {"auto", "power", "direct"}
        "auto" routes between the convergent series, panel quadrature and,
        for the one-sided member deep in the small-r tail, the transform
        to G_alpha evaluated on its steepest-descent contour.  "power"
        forces quadrature in the variable u = t**alpha; "direct" forces
        the original variable.  The forced routes are mutual cross-checks.
    abs_floor : float
        When positive, a cancellation failure whose absolute error bound
        is below this floor returns its estimate instead of raising.
        Quadratures integrating the density against a weight use this;
        the default 0.0 keeps the strict relative contract.
    """
    if r <= 0:
        raise DomainError(f"r must be positive, got {r}")
    alpha, gamma = params.alpha, params.gamma
    s = _sinpi(gamma)
    if s == 0.0:
        return 0.0
    if gamma < 0.0:
        flipped = StableParams(alpha, -gamma)
        return -eval_density(flipped, r, cfg, substitution, abs_floor)
    if not params.in_safe_band():
        warnings.warn(
            f"alpha={alpha} outside the supported accuracy band",
            PrecisionWarning,
            stacklevel=2,
        )
    c = _cospi(gamma)
    if substitution == "auto":
        res = _density_series(alpha, gamma, r)
        if res.good(cfg):
            return float(res.value.real)
        if res.converged and 0.0 < res.abs_error <= abs_floor:
            return float(res.value.real)
        if gamma == alpha and params.delta * r ** (-params.beta) > _DEPTH_CONTOUR:
            # deep small-r tail of the one-sided member: the transform to
            # G_alpha lands in its contour regime, which cancels nothing
            x_big = r ** (-params.beta)
            g_val = eval_G_real(params, x_big, cfg)
            return params.beta * r ** (-1.0 / (1.0 - alpha)) * g_val
        try:
            value, _ = _osc_sine_quad(r, 1.0 / alpha, c, s, 1.0 / alpha - 1.0, cfg)
        except QuadratureError as exc:
            value = _salvage(exc, abs_floor, math.pi * alpha)
        return value / (math.pi * alpha)
    if substitution == "power":
        value, _ = _osc_sine_quad(r, 1.0 / alpha, c, s, 1.0 / alpha - 1.0, cfg)
        return value / (math.pi * alpha)
    if substitution == "direct":
        value, _ = _osc_sine_quad_t(r, c, s, alpha, cfg)
        return value / math.pi
    raise DomainError(f"unknown substitution {substitution!r}")


def eval_tail(
    params: StableParams,
    x: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    abs_floor: float = 0.0,
) -> float:
    """Upper tail integral of g_{alpha,gamma} from x to infinity."""
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    alpha, gamma = params.alpha, params.gamma
    s = _sinpi(gamma)
    if s == 0.0:
        return 0.0
    if gamma < 0.0:
        return -eval_tail(StableParams(alpha, -gamma), x, cfg, abs_floor)
    res = _tail_series(alpha, gamma, x)
    if res.good(cfg):
        return float(res.value.real)
    if res.converged and 0.0 < res.abs_error <= abs_floor:
        return float(res.value.real)
    c = _cospi(gamma)
    try:
        value, _ = _osc_sine_quad(x, 1.0 / alpha, c, s, -1.0, cfg)
    except QuadratureError as exc:
        value = _salvage(exc, abs_floor, math.pi * alpha)
    return value / (math.pi * alpha)


# ---------------------------------------------------------------------------
# G_alpha on the positive axis and the cut plane.


def _G_quad_direct(alpha: float, x: float, cfg: QuadratureConfig) -> float:
    """Direct quadrature of the defining integral of G_alpha at real x."""
    beta = alpha / (1.0 - alpha)
    w = x ** (1.0 - alpha)
    a = w * _cospi(alpha)
    b = w * _sinpi(alpha)
    value, _ = _osc_sine_quad(1.0, 1.0 / alpha, a, b, 1.0 / alpha - 1.0, cfg)
    return value / (math.pi * beta * x * alpha)


def _G_transform(params: StableParams, x: float, cfg: QuadratureConfig) -> float:
    """G_alpha via the power-transform identity from the stable density."""
    beta = params.beta
    r = x ** (-1.0 / beta)
    one_sided = StableParams(params.alpha)
    return eval_density(one_sided, r, cfg) * x ** (-1.0 / params.alpha) / beta


def _mid_zone_error_model(delta_x: float, cfg: QuadratureConfig) -> float:
    return 4.0 * cfg.rel_tol + 10.0 * _EPS * math.exp(min(delta_x, 80.0)) + 1e-13


def eval_G_real(
    params: StableParams,
    x: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
    full_output: bool = False,
):
    """Density of S_alpha**(-beta) at x > 0.

    Mid-range values are computed twice, through the power-transform
    identity (returned) and the direct oscillatory quadrature (check);
    disagreement beyond ten times the combined error model raises
    CrossValidationError.  Small x uses the convergent series; once
    delta*x is large enough that both quadratures drown in cancellation,
    the steepest-descent contour takes over and is sanity-checked against
    the fitted large-x form.

    With full_output=True returns (value, regime), regime in
    {"series", "dual", "contour"}.
    """
    if x <= 0:
        raise DomainError(f"x must be positive, got {x}")
    if params.gamma != params.alpha:
        raise DomainError("G_alpha is defined for the one-sided law (gamma == alpha)")
    alpha = params.alpha
    delta = params.delta

    res = _G_series(alpha, x)
    if res.good(cfg):
        value, regime = float(res.value.real), "series"
    elif delta * x <= _DEPTH_CONTOUR:
        primary = _G_transform(params, x, cfg)
        check = _G_quad_direct(alpha, x, cfg)
        tol = _mid_zone_error_model(delta * x, cfg)
        if abs(primary - check) > 10.0 * tol * abs(primary):
            raise CrossValidationError(
                f"transform route {primary!r} and direct quadrature {check!r} "
                f"disagree beyond 10x combined tolerance {tol:.2e} at x={x}"
            )
        value, regime = primary, "dual"
    else:
        from . import saddle

        value_c = saddle.contour_eval_G(params, complex(x, 0.0), 1.0, cfg)
        value = float(value_c.real)
        if value <= 0.0 or abs(value_c.imag) > 1e-6 * abs(value):
            raise QuadratureError(
                f"contour route returned non-positive or non-real value "
                f"{value_c!r} at x={x}"
            )
        d1 = large_x_correction(alpha)
        asym = _asymptotic_G(params, x, d1)
        rel_gap = abs(value - asym) / value
        allowed = 200.0 * (1.0 + d1 * d1) / (x * x) + 1e-6
        if rel_gap > allowed:
            raise CrossValidationError(
                f"contour value {value!r} vs large-x form {asym!r}: relative "
                f"gap {rel_gap:.2e} exceeds {allowed:.2e} at x={x}"
            )
        regime = "contour"
    if full_output:
        return value, regime
    return value


def _asymptotic_G(params: StableParams, x: float, d1: float) -> float:
    c_inf = (2.0 * math.pi * params.beta) ** -0.5 * params.alpha ** (params.beta / 2.0)
    return c_inf * x**-0.5 * math.exp(-params.delta * x) * (1.0 + d1 / x)


_D1_CACHE: dict[float, float] = {}


def large_x_correction(alpha: float) -> float:
    """First-order large-x correction coefficient of G_alpha, fitted once.

    G(x) ~ c_inf x^(-1/2) e^(-delta x) (1 + d1/x + O(x^-2)); d1 is pinned
    against the contour evaluation at two interior points and cached.
    """
    d1 = _D1_CACHE.get(alpha)
    if d1 is not None:
        return d1
    from . import saddle

    params = StableParams(alpha)
    delta = params.delta
    c_inf = (2.0 * math.pi * params.beta) ** -0.5 * alpha ** (params.beta / 2.0)
    xs = (14.0 / delta, 22.0 / delta)
    fits = []
    for x in xs:
        g = saddle.contour_eval_G(params, complex(x, 0.0), 1.0).real
        ratio = g / (c_inf * x**-0.5 * math.exp(-delta * x))
        fits.append((ratio - 1.0) * x)
    # two-point extrapolation removes the next-order contamination
    x1, x2 = xs
    d1 = (fits[1] * x2 - fits[0] * x1) / (x2 - x1)
    if abs(d1 - fits[0]) > 0.2 * (1.0 + abs(d1)):
        warnings.warn(
            f"large-x correction fit unstable for alpha={alpha}: "
            f"{fits[0]:.4f} vs {d1:.4f}",
            PrecisionWarning,
            stacklevel=2,
        )
    _D1_CACHE[alpha] = d1
    return d1


def _cexpm1(w):
    w = complex(w)
    if abs(w) < 1e-4:
        return w * (1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0)))
    return np.exp(w) - 1.0


def _G_quad_complex(alpha: float, z: complex, cfg: QuadratureConfig) -> complex:
    """Direct quadrature of G_alpha off the cut, in the u = t**alpha variable.

    Uses the two-exponential form with the difference folded into expm1,
    which keeps the small-u region fully cancellation-free:

        G(z) = i (2 pi beta alpha z)^-1 *
               int_0^inf exp(-u^(1/alpha) - e^(i pi alpha) Z u)
                         expm1(2i sin(pi alpha) Z u) u^(1/alpha - 1) du,

    Z = z^(1-alpha).
    """
    beta = alpha / (1.0 - alpha)
    Z = complex(z) ** (1.0 - alpha)
    e_plus = np.exp(1j * math.pi * alpha) * Z
    e_minus = np.exp(-1j * math.pi * alpha) * Z
    chi = 2j * math.sin(math.pi * alpha) * Z
    growth = max(0.0, -e_plus.real, -e_minus.real)
    p = 1.0 / alpha - 1.0
    q = 1.0 / alpha

    def phi(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            extra = p * np.log(u) if p != 0.0 else 0.0
            return -(u**q) + growth * u + extra

    phi_max, u_cut = _envelope_peak_and_cut(phi, cfg.truncation_tail_tol)
    if phi_max > _OVERFLOW_EXP:
        raise QuadratureError("complex integrand envelope overflows")
    freq = max(abs(e_plus.imag), abs(e_minus.imag), 1e-12)
    n_zeros = min(int(freq * u_cut / math.pi), _MAX_PANELS + 1)
    if n_zeros > _MAX_PANELS:
        raise QuadratureError("oscillation panel budget exceeded")
    edges = np.unique(
        np.concatenate(
            [np.arange(0, n_zeros + 1) * math.pi / freq, np.linspace(0.0, u_cut, 9)]
        )
    )
    edges = edges[edges <= u_cut]
    if edges[-1] < u_cut:
        edges = np.append(edges, u_cut)

    def f(u):
        if u <= 0.0:
            return 0.0j
        lead = -(u**q) - e_plus * u + p * math.log(u)
        return np.exp(lead) * _cexpm1(chi * u)

    scale = math.exp(min(phi_max, 690.0))
    panels = _paneled_quad(f, list(edges), scale, u_cut, cfg, complex_valued=True)
    total = sum(panels)
    max_panel = max((abs(v) for v in panels), default=0.0)
    if total == 0.0:
        raise QuadratureError("complex quadrature collapsed to zero")
    depth = max_panel / abs(total)
    est = depth * (cfg.rel_tol + 4.0 * _EPS)
    if est > 1e-5:
        raise QuadratureError(f"cancellation depth {depth:.2e} too deep")
    prefactor = 1j / (2.0 * math.pi * beta * alpha * z)
    return complex(prefactor * total)


def _complex_depth(alpha: float, z: complex) -> float:
    """Cancellation-depth estimate for the direct complex quadrature."""
    params = StableParams(alpha)
    Z = complex(z) ** (1.0 - alpha)
    e_plus = np.exp(1j * math.pi * alpha) * Z
    e_minus = np.exp(-1j * math.pi * alpha) * Z
    growth = max(0.0, -e_plus.real, -e_minus.real)
    q = 1.0 / alpha
    if growth <= 0.0 or q <= 1.0:
        phi_max = 0.0
    else:
        u_star = (growth / q) ** (1.0 / (q - 1.0))
        phi_max = -(u_star**q) + growth * u_star
    return phi_max + params.delta * z.real + 0.5 * math.log1p(abs(z))


def eval_G_complex(
    params: StableParams,
    z: complex,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> complex:
    """Analytic continuation of G_alpha to the plane cut along (-inf, 0].

    Principal-branch powers throughout.  Points on the cut are rejected;
    boundary values belong to the `boundary` module, which resolves the
    side of approach explicitly.
    """
    z = complex(z)
    if z == 0 or (z.imag == 0.0 and z.real < 0.0):
        raise DomainError(
            "z on the cut (-inf, 0]; use boundary.boundary_value for the "
            "one-sided limits"
        )
    alpha = params.alpha
    if z.imag == 0.0:
        return complex(eval_G_real(params, z.real, cfg))
    res = _G_series(alpha, z)
    if res.good(cfg):
        return complex(res.value)
    if _complex_depth(alpha, z) <= _DEPTH_CONTOUR_COMPLEX:
        return _G_quad_complex(alpha, z, cfg)
    from . import saddle

    if z.imag < 0.0:
        return complex(np.conj(eval_G_complex(params, complex(z.real, -z.imag), cfg)))
    phi = math.atan2(z.imag, z.real)
    lo = max(0.5 - alpha, 0.0)
    theta = min(1.0, max(1.0 - phi / math.pi, lo + 0.05))
    return saddle.contour_eval_G(params, z, theta, cfg)


# ---------------------------------------------------------------------------
# Scaling and mixture identities.


def cauchy_family_density(gamma: float, x: float) -> float:
    """Index-1 member of the density family (closed form).

    sin(pi*gamma) / (pi*(x**2 + 2*x*cos(pi*gamma) + 1)); this is what the
    index-ratio mixture produces when the two indices coincide.
    """
    s = _sinpi(gamma)
    if s == 0.0:
        return 0.0
    return s / (math.pi * (x * x + 2.0 * x * _cospi(gamma) + 1.0))


def _series_coefficients(alpha, gamma, n):
    """Coefficients A_m of the large-argument series sum A_m r**(-m*alpha-1)."""
    m = np.arange(1, n + 1, dtype=float)
    return (
        _alternating_sign(m)
        * np.sin(np.pi * gamma * m)
        * np.exp(gammaln(m * alpha + 1.0) - gammaln(m + 1.0))
        / math.pi
    )


def _mixture_tail_closed_form(alpha, gamma, dprime, x, y_hi, n_terms=40):
    """Tail of the mixture integral beyond y_hi via the two power series.

    For y >= y_hi both factors are deep in their convergent
    large-argument series, so each product term integrates to an explicit
    power of y_hi; the double series is summed to machine accuracy.
    """
    a_coef = _series_coefficients(alpha, gamma, n_terms)
    b_coef = _series_coefficients(dprime, dprime, n_terms)
    m = np.arange(1, n_terms + 1, dtype=float)
    n = np.arange(1, n_terms + 1, dtype=float)
    xa = x ** (-(m * alpha + 1.0))
    expo = m[:, None] * alpha + n[None, :] * dprime
    tail = (a_coef * xa)[:, None] * b_coef[None, :] * y_hi ** (-expo) / expo
    return float(tail.sum())


def _negligible_cut(alpha: float, floor_log: float) -> float:
    """Largest y (up to 1) with log_density_bound(alpha, y) <= floor_log."""
    lo, hi = 1e-300, 1.0
    if log_density_bound(alpha, hi) <= floor_log:
        return hi
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if log_density_bound(alpha, mid) <= floor_log:
            lo = mid
        else:
            hi = mid
        if hi / lo < 1.0 + 1e-3:
            break
    return lo


def mixture_identity_residual(
    alpha: float,
    gamma: float,
    delta_prime: float,
    x: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """Residual of the index-ratio mixture identity, LHS - RHS.

    Checks int_0^inf g_{alpha,gamma}(x*y) g_{delta'}(y) y dy =
    x**(delta'-1) g_{alpha/delta',gamma}(x**delta').  Requires
    0 < alpha <= delta_prime < 1; at alpha == delta_prime the right side
    is the closed-form index-1 family member.
    """
    if not (0.0 < alpha <= delta_prime < 1.0):
        raise DomainError("need 0 < alpha <= delta_prime < 1")
    if x <= 0:
        raise DomainError("x must be positive")
    ratio = alpha / delta_prime
    if ratio == 1.0:
        rhs = x ** (delta_prime - 1.0) * cauchy_family_density(gamma, x**delta_prime)
    else:
        rhs = x ** (delta_prime - 1.0) * eval_density(
            StableParams(ratio, gamma), x**delta_prime, cfg
        )

    mix = StableParams(delta_prime)
    fam = StableParams(alpha, gamma)

    y_lo = _negligible_cut(delta_prime, -65.0)
    y_hi = max(4.0, 4.0 / x, y_lo * 10.0)

    def integrand(y):
        fy = eval_density(mix, y, cfg, abs_floor=1e-11)
        if fy == 0.0:
            return 0.0
        gxy = eval_density(fam, x * y, cfg, abs_floor=1e-11)
        return gxy * fy * y

    body, _ = quad_checked(
        integrand,
        y_lo,
        y_hi,
        config=cfg,
        rel_tol=1e-9,
        abs_tol=1e-12 * max(1.0, abs(rhs)),
        points=[min(1.0, y_hi / 2.0), min(2.0, y_hi * 0.75)],
        limit=300,
    )
    tail = _mixture_tail_closed_form(alpha, gamma, delta_prime, x, y_hi)
    return body + tail - rhs


def half_stable_mixture(
    alpha: float,
    gamma: float,
    x: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> float:
    """g_{alpha,gamma}(x) through the index-doubling gamma mixture.

    Uses the identity (valid for 0 < alpha < 1/2 and |gamma| < 1/2, both
    parameters doubling together)

        g_{alpha,gamma}(x) = (alpha/sqrt(pi)) * x**-(alpha+1)
            * int_0^inf g_{2*alpha,2*gamma}(y) y**alpha
                        exp(-(y/x)**(2*alpha)/4) dy.

    At alpha == 1/2 the mixture degenerates to a point mass and the call
    falls back to eval_density.  The identity fails at |gamma| == 1/2
    (the doubled second parameter hits the zero member), which is
    rejected.  Coefficients follow the Laplace-exponent normalization
    used throughout this package; see the README convention note.
    """
    if not 0.0 < alpha <= 0.5:
        raise DomainError("index-doubling mixture needs 0 < alpha <= 1/2")
    if x <= 0:
        raise DomainError("x must be positive")
    if alpha == 0.5:
        return eval_density(StableParams(0.5, gamma), x, cfg)
    if abs(gamma) >= 0.5:
        raise DomainError(
            "the doubled parameter 2*gamma must stay inside (-1, 1); the "
            "identity degenerates at |gamma| = 1/2"
        )
    if gamma == 0.0:
        return 0.0
    doubled = StableParams(2.0 * alpha, 2.0 * gamma)
    two_a = 2.0 * alpha

    y_lo = _negligible_cut(two_a, -65.0)
    # integrand tail is cut by the stretched-Gaussian factor
    y_hi = x * (4.0 * 60.0) ** (1.0 / two_a)

    def integrand(y):
        fy = eval_density(doubled, y, cfg, abs_floor=1e-11)
        if fy == 0.0:
            return 0.0
        return fy * y**alpha * math.exp(-((y / x) ** two_a) / 4.0)

    val, _ = quad_checked(
        integrand,
        y_lo,
        y_hi,
        config=cfg,
        rel_tol=1e-9,
        abs_tol=cfg.abs_tol,
        points=[min(1.0, y_hi / 2.0)],
        limit=300,
    )
    return alpha / math.sqrt(math.pi) * x ** (-(alpha + 1.0)) * val
