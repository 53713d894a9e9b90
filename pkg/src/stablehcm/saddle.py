"""Steepest-descent machinery for the stable-density integrals.

The defining integrals concentrate, after rescaling, around the interior
minimum t0 = alpha**(1/(1-alpha)) of

    f0(t) = t - t**alpha + delta,       f0(t0) = 0,  f0''(t0) > 0.

For a rotation angle theta the level curves f(v) = r * e^(i*pi*theta),
r >= 0, leave t0 in conjugate pairs (v_plus into the closed upper half
plane, v_minus mirror) and provide cancellation-free contours for G_alpha
deep in its exponential tail:

    G(z) = (i / (2 pi beta)) e^(-delta z) z e^(i pi theta)
           * int_0^inf e^(z e^(i pi theta) t) (v_plus(t) - v_minus(t)) dt,

valid whenever Re(z e^(i pi theta)) < 0 and |theta| lies in the
admissible window ((1/2 - alpha)^+, 1].

Curves are traced once per (alpha, theta) by an explicit-midpoint
predictor along dv/dr = e^(i pi theta)/f'(v) with Newton correction, and
the integration then re-solves v at each quadrature node from the traced
samples, so no interpolation error enters the contour integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ContinuationError, DomainError, QuadratureError
from .params import DEFAULT_QUAD, QuadratureConfig, StableParams
from .quadrature import quad_complex

__all__ = [
    "PhaseFunction",
    "SaddleCurve",
    "phase_pair",
    "admissible_theta_window",
    "trace_curves",
    "contour_eval_G",
    "curve_growth_check",
    "rough_bound_scan",
    "RoughBoundFit",
]


def admissible_theta_window(alpha: float) -> tuple[float, float]:
    """Open-closed window (lo, 1] of admissible |theta| for this alpha."""
    return (max(0.5 - alpha, 0.0), 1.0)


@dataclass(frozen=True)
class PhaseFunction:
    """One branch of the continued phase f(v) = v - v**alpha + delta.

    branch "plus" continues analytically from (0, inf) through the upper
    half-plane: principal powers for Im v >= 0, and the sheet reached by
    crossing the negative axis from above (factor e^(2 i pi alpha) on the
    power) for Im v < 0.  branch "minus" is the mirror image.  The traced
    curves themselves never leave the closed half-plane of their branch,
    so the off-sheet values only serve transient Newton iterates.
    """

    alpha: float
    branch: str = "plus"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise DomainError(f"alpha must lie in (0,1), got {self.alpha}")
        if self.branch not in ("plus", "minus"):
            raise DomainError(f"branch must be 'plus' or 'minus', got {self.branch}")

    @property
    def t0(self) -> float:
        return self.alpha ** (1.0 / (1.0 - self.alpha))

    @property
    def delta(self) -> float:
        return (1.0 - self.alpha) * self.alpha ** (self.alpha / (1.0 - self.alpha))

    @property
    def curvature(self) -> float:
        # f''(t0)
        return self.alpha * (1.0 - self.alpha) * self.t0 ** (self.alpha - 2.0)

    def _power_factor(self, v: complex) -> complex:
        twist = np.exp(2j * math.pi * self.alpha)
        if self.branch == "plus":
            return 1.0 + 0j if v.imag >= 0.0 else twist
        return 1.0 + 0j if v.imag <= 0.0 else np.conj(twist)

    def __call__(self, v) -> complex:
        v = complex(v)
        return v - self._power_factor(v) * v**self.alpha + self.delta

    def derivative(self, v) -> complex:
        v = complex(v)
        return 1.0 - self._power_factor(v) * self.alpha * v ** (self.alpha - 1.0)


def phase_pair(alpha: float) -> tuple[PhaseFunction, PhaseFunction]:
    return PhaseFunction(alpha, "plus"), PhaseFunction(alpha, "minus")


@dataclass(frozen=True, eq=False)
class SaddleCurve:
    """Conjugate pair of traced level curves for one (alpha, theta).

    r_samples starts at 0, where both curves sit at the saddle t0.
    Residuals are |f_branch(v(r)) - r e^(i pi theta)| at the samples.
    """

    alpha: float
    theta: float
    r_samples: np.ndarray
    v_plus: np.ndarray
    v_minus: np.ndarray
    residual_plus: np.ndarray = field(repr=False)
    residual_minus: np.ndarray = field(repr=False)

    @property
    def r_max(self) -> float:
        return float(self.r_samples[-1])

    def _solve(self, r, start_real, start_imag, half_sign):
        params = StableParams(self.alpha)
        target = np.asarray(r, dtype=float) * np.exp(1j * math.pi * self.theta)
        v = np.interp(r, self.r_samples, start_real) + 1j * np.interp(
            r, self.r_samples, start_imag
        )
        for _ in range(4):
            res = v - v**self.alpha + params.delta - target
            deriv = 1.0 - self.alpha * v ** (self.alpha - 1.0)
            v = v - res / deriv
        res = np.abs(v - v**self.alpha + params.delta - target)
        tol = 1e-10 * (1.0 + np.abs(target))
        if np.any(res > tol):
            worst = float(res.max())
            raise ContinuationError(
                f"curve re-solve lost the root (residual {worst:.2e})"
            )
        bad_side = half_sign * v.imag < -1e-9 * (1.0 + np.abs(v))
        if np.any(bad_side):
            raise ContinuationError("curve re-solve crossed the real axis")
        return v

    def plus_at(self, r):
        """v_plus at arbitrary r <= r_max (vectorized Newton re-solve)."""
        return self._solve(r, self.v_plus.real, self.v_plus.imag, +1.0)

    def minus_at(self, r):
        return self._solve(r, self.v_minus.real, self.v_minus.imag, -1.0)

    def to_csv(self, path) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "re_vplus", "im_vplus", "re_vminus", "im_vminus"])
            for r, vp, vm in zip(self.r_samples, self.v_plus, self.v_minus):
                writer.writerow(
                    [
                        f"{r:.17g}",
                        f"{vp.real:.17g}",
                        f"{vp.imag:.17g}",
                        f"{vm.real:.17g}",
                        f"{vm.imag:.17g}",
                    ]
                )


def _newton_polish(phase, target, v, tol):
    for _ in range(6):
        res = phase(v) - target
        if abs(res) <= tol:
            return v, abs(res)
        d = phase.derivative(v)
        if d == 0:
            break
        v = v - res / d
    return v, abs(phase(v) - target)


def _check_position(v, half_sign, context):
    if half_sign * v.imag < -1e-9 * (1.0 + abs(v)):
        raise ContinuationError(f"{context}: curve crossed the real axis at {v!r}")
    if v.real < 0.0 and abs(v.imag) < 1e-12 * (1.0 + abs(v)):
        raise ContinuationError(f"{context}: curve approached the branch cut at {v!r}")


def _march(phase, e_theta, r0, v0, r1, half_sign, tol_scale, depth=0):
    """Advance the root of phase(v) = r*e_theta from r0 to r1."""
    h = r1 - r0
    d0 = e_theta / phase.derivative(v0)
    v_mid = v0 + 0.5 * h * d0
    v_pred = v0 + h * (e_theta / phase.derivative(v_mid))
    target = r1 * e_theta
    tol = tol_scale * (1.0 + abs(target))
    v1, res = _newton_polish(phase, target, v_pred, tol)
    if res <= tol:
        _check_position(v1, half_sign, "trace")
        return v1
    if depth >= 45:
        raise ContinuationError(
            f"step subdivision exhausted near r={r1} (residual {res:.2e})"
        )
    rm = 0.5 * (r0 + r1)
    vm = _march(phase, e_theta, r0, v0, rm, half_sign, tol_scale, depth + 1)
    return _march(phase, e_theta, rm, vm, r1, half_sign, tol_scale, depth + 1)


def trace_curves(
    phases: tuple[PhaseFunction, PhaseFunction],
    theta: float,
    r_max: float,
    n_steps: int | None = None,
) -> SaddleCurve:
    """Trace the conjugate saddle curves out to radius r_max.

    phases is the (plus, minus) pair from phase_pair.  The r-grid is
    geometric with ratio 1.05 ending at r_max; the first step seeds both
    branches from the quadratic normal form of the saddle,
    v = t0 +/- sqrt(2 r / f''(t0)) e^(i pi theta / 2), and every later
    sample is predictor-corrected with automatic step halving.
    """
    f_plus, f_minus = phases
    if f_plus.branch != "plus" or f_minus.branch != "minus":
        raise DomainError("phases must be the (plus, minus) pair")
    if f_plus.alpha != f_minus.alpha:
        raise DomainError("phase pair must share alpha")
    alpha = f_plus.alpha
    lo, hi = admissible_theta_window(alpha)
    if not (lo < abs(theta) <= hi):
        raise DomainError(
            f"theta={theta} outside the admissible window (+/-({lo}, {hi}])"
        )
    if r_max <= 0:
        raise DomainError("r_max must be positive")
    ratio = 1.05
    if n_steps is None:
        n_steps = max(8, int(math.ceil(math.log(1e9) / math.log(ratio))))
    r_grid = r_max * ratio ** (-np.arange(n_steps - 1, -1, -1, dtype=float))

    t0 = f_plus.t0
    a2 = f_plus.curvature
    e_theta = np.exp(1j * math.pi * theta)
    half = np.exp(0.5j * math.pi * theta)
    if theta < 0:
        half = -half  # keep the plus branch in the upper half-plane

    r1 = float(r_grid[0])
    spread = math.sqrt(2.0 * r1 / a2)
    tol_scale = 1e-13
    seeds = {}
    for sign, phase, half_sign in ((+1.0, f_plus, +1.0), (-1.0, f_minus, -1.0)):
        v_seed = t0 + sign * spread * half
        target = r1 * e_theta
        v, res = _newton_polish(phase, target, v_seed, tol_scale * (1.0 + abs(target)))
        if res > 1e-10 * (1.0 + abs(target)):
            raise ContinuationError(
                f"seed Newton failed at r={r1} (residual {res:.2e})"
            )
        _check_position(v, half_sign, "seed")
        seeds[sign] = v

    points = {+1.0: [seeds[+1.0]], -1.0: [seeds[-1.0]]}
    for sign, phase, half_sign in ((+1.0, f_plus, +1.0), (-1.0, f_minus, -1.0)):
        v = points[sign][0]
        for r_prev, r_next in zip(r_grid[:-1], r_grid[1:]):
            v = _march(phase, e_theta, float(r_prev), v, float(r_next), half_sign,
                       tol_scale)
            points[sign].append(v)

    r_all = np.concatenate([[0.0], r_grid])
    v_plus = np.concatenate([[complex(t0)], np.array(points[+1.0])])
    v_minus = np.concatenate([[complex(t0)], np.array(points[-1.0])])
    targets = r_all * e_theta
    res_plus = np.array(
        [abs(f_plus(v) - t) for v, t in zip(v_plus, targets)]
    )
    res_minus = np.array(
        [abs(f_minus(v) - t) for v, t in zip(v_minus, targets)]
    )
    if np.any(v_plus[1:] == v_minus[1:]):
        raise ContinuationError("plus and minus curves collided at positive r")
    return SaddleCurve(
        alpha=alpha,
        theta=theta,
        r_samples=r_all,
        v_plus=v_plus,
        v_minus=v_minus,
        residual_plus=res_plus,
        residual_minus=res_minus,
    )


@lru_cache(maxsize=256)
def _cached_curve(alpha: float, theta_q: float, r_bucket: int) -> SaddleCurve:
    r_max = 4.0**r_bucket
    return trace_curves(phase_pair(alpha), theta_q, r_max)


def _curve_for(alpha: float, theta: float, r_needed: float) -> SaddleCurve:
    bucket = max(0, int(math.ceil(math.log(max(r_needed, 1.0)) / math.log(4.0))))
    return _cached_curve(alpha, round(theta, 9), bucket)


def contour_eval_G(
    params: StableParams,
    z: complex,
    theta: float,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> complex:
    """G_alpha(z) integrated along the theta-rotated saddle contour.

    Admissible when |theta| lies in ((1/2-alpha)^+, 1] and the rotated
    argument zeta = z e^(i pi theta) has Re zeta < 0.  The integrand is
    smooth in s = sqrt(t) (the curves separate like sqrt(r) at the
    saddle), and panels follow the oscillation of Im(zeta) s**2.  This
    route involves no cancellation between panels, which is what makes it
    usable arbitrarily deep in the tail.
    """
    alpha = params.alpha
    z = complex(z)
    lo, hi = admissible_theta_window(alpha)
    if not (lo < abs(theta) <= hi):
        raise DomainError(f"theta={theta} outside admissible window ({lo}, {hi}]")
    zeta = z * np.exp(1j * math.pi * theta)
    if zeta.real >= 0.0:
        raise DomainError(
            f"rotated argument z*e^(i pi theta) = {zeta!r} must have negative "
            "real part"
        )
    if params.delta * z.real > 700.0 or params.delta * z.real < -700.0:
        raise QuadratureError("e^(-delta z) overflows/underflows at this z")

    t_cut = 52.0 / (-zeta.real)
    curve = _curve_for(alpha, theta, t_cut)
    s_cut = math.sqrt(t_cut)

    freq = abs(zeta.imag)
    if freq * t_cut / math.pi > 3000.0:
        raise QuadratureError("contour oscillation panel budget exceeded")
    osc_nodes = []
    if freq > 0.0:
        k_max = int(freq * t_cut / math.pi)
        osc_nodes = [math.sqrt(k * math.pi / freq) for k in range(1, k_max + 1)]
    base = np.linspace(0.0, s_cut, 12)
    edges = np.unique(np.concatenate([base, np.asarray(osc_nodes, dtype=float)]))
    edges = edges[(edges >= 0.0) & (edges <= s_cut)]
    if edges[-1] < s_cut:
        edges = np.append(edges, s_cut)

    def integrand(s):
        if s <= 0.0:
            return 0.0j
        t = s * s
        vp = curve.plus_at(np.array([t]))[0]
        vm = curve.minus_at(np.array([t]))[0]
        return np.exp(zeta * t) * (vp - vm) * 2.0 * s

    total = 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        val, _ = quad_complex(
            integrand, float(a), float(b), config=cfg, abs_tol=cfg.abs_tol
        )
        total += val

    prefactor = (0.5j / math.pi / params.beta) * np.exp(-params.delta * z) * z
    return complex(prefactor * np.exp(1j * math.pi * theta) * total)


def curve_growth_check(curve: SaddleCurve) -> float:
    """Smallest A with |v(r)| <= A + 2r along both traced curves."""
    r = curve.r_samples
    return float(
        max(
            (np.abs(curve.v_plus) - 2.0 * r).max(),
            (np.abs(curve.v_minus) - 2.0 * r).max(),
        )
    )


@dataclass(frozen=True)
class RoughBoundFit:
    """Least envelope |G(z) e^(delta z)| <= a_const + b_coeff/|z| on a z-set."""

    a_const: float
    b_coeff: float
    n_points: int
    worst_gap: float

    def bound_at(self, z: complex) -> float:
        return self.a_const + self.b_coeff / abs(z)


def rough_bound_scan(
    params: StableParams,
    z_points,
    cfg: QuadratureConfig = DEFAULT_QUAD,
) -> RoughBoundFit:
    """Fit the minimal two-term envelope to |G e^(delta z)| over z_points.

    Solves the tiny linear program min(A + B) subject to
    A + B/|z| >= |G(z) e^(delta z)| at every supplied point.
    """
    from scipy.optimize import linprog

    from . import stable_core

    z_points = [complex(z) for z in z_points]
    if not z_points:
        raise DomainError("z_points must be non-empty")
    weights = []
    for z in z_points:
        g = stable_core.eval_G_complex(params, z, cfg)
        weights.append(abs(g * np.exp(params.delta * z)))
    w = np.asarray(weights)
    radii = np.array([abs(z) for z in z_points])
    a_ub = -np.column_stack([np.ones_like(radii), 1.0 / radii])
    res = linprog(
        c=[1.0, 1.0],
        A_ub=a_ub,
        b_ub=-w,
        bounds=[(0.0, None), (0.0, None)],
        method="highs",
    )
    if not res.success:
        raise QuadratureError(f"envelope fit LP failed: {res.message}")
    a_const, b_coeff = float(res.x[0]), float(res.x[1])
    gaps = a_const + b_coeff / radii - w
    return RoughBoundFit(a_const, b_coeff, len(z_points), float(gaps.min()))
