"""Barrier and comparison machinery behind the boundary lower bound.

A positive solution u in a ball-shaped domain is compared from below with
u_- = u on the deep interior D plus eps * psi_rho on a small ball touching
the boundary. The constants of that argument (the bound c0 on the operator
of psi, the kernel mass C(rho) of D, inf_D u and the admissible eps) are
measured here instead of being derived.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DivisionByNearZero, DomainError, NonConvergence
from ..model import Params, Profile
from ..oplap1d import eval_direct_1d
from ..oplapnd import eval_radial_nd, sphere_measure
from ..quad import QuadConfig, integrate
from .common import operator_at

__all__ = [
    "scaling_check",
    "homogeneity_check",
    "hopf_ratio",
    "ball_kernel_mass",
    "HopfReport",
    "hopf_report",
    "ComparisonReport",
    "comparison_probe",
    "constructed_pairs",
]


def _eval_inside(u: Profile, x, params: Params, cfg: QuadConfig):
    if params.n == 1:
        return eval_direct_1d(u, float(np.asarray(x, dtype=float).reshape(())), params, cfg)
    return eval_radial_nd(u, float(np.linalg.norm(np.atleast_1d(x))), params, cfg)


def scaling_check(rho: float, x, params: Params, cfg: Optional[QuadConfig] = None) -> float:
    """Relative error of  L psi_rho(x) * rho^(sp) = L psi(x / rho).

    Both sides use the direct evaluator (n = 1) or the radial reduction
    (n >= 2), so rho = 1 compares an evaluation with itself.
    """
    cfg = cfg or QuadConfig()
    if not rho > 0:
        raise DomainError("rho must be positive")
    x = np.asarray(x, dtype=float)
    if not float(np.linalg.norm(np.atleast_1d(x))) < rho:
        raise DomainError("x must satisfy |x| < rho")
    scaled = _eval_inside(Profile.scaled_bump(params.s, rho), x, params, cfg)
    base = _eval_inside(Profile.bump(params.s), x / rho, params, cfg)
    if abs(base.value) < 10.0 * base.err_est:
        raise DivisionByNearZero(
            f"reference value {base.value!r} is within 10 error bars of zero")
    return abs(scaled.value * rho ** params.sp / base.value - 1.0)


def homogeneity_check(u: Profile, x, lam: float, params: Params,
                      cfg: Optional[QuadConfig] = None) -> float:
    """Relative error of  L(lam u) = lam^(p-1) L u  at x."""
    cfg = cfg or QuadConfig()
    ref = operator_at(u, x, params, cfg)
    got = operator_at(u.scaled(lam), x, params, cfg)
    want = lam ** (params.p - 1.0) * ref.value
    if abs(want) < 10.0 * abs(lam) ** (params.p - 1.0) * ref.err_est:
        raise DivisionByNearZero("reference value is within 10 error bars of zero")
    return abs(got.value / want - 1.0)


def _boundary_hit(u: Profile, origin, direction) -> tuple[np.ndarray, np.ndarray, float]:
    o = np.atleast_1d(np.asarray(origin, dtype=float))
    d = np.atleast_1d(np.asarray(direction, dtype=float))
    if o.shape != d.shape:
        raise DomainError("origin and direction must have the same dimension")
    d = d / np.linalg.norm(d)
    R = u.support_radius
    if not math.isfinite(R):
        raise DomainError("the ray never leaves an unbounded support")
    od = float(o @ d)
    disc = od * od - float(o @ o) + R * R
    if disc < 0:
        raise DomainError("the ray misses the support")
    t_hit = -od + math.sqrt(disc)
    if t_hit <= 0:
        raise DomainError("the support boundary lies behind the ray origin")
    return o, d, t_hit


def hopf_ratio(u: Profile, ray_origin, ray_dir, deltas: Sequence[float],
               s: Optional[float] = None) -> list[tuple[float, float]]:
    """(delta, u(x_delta) / delta^s) for x_delta at distance delta before the
    point where the ray leaves the support."""
    s = u.s_exp if s is None else s
    if s is None:
        raise DomainError("an exponent s is needed for this profile")
    o, d, t_hit = _boundary_hit(u, ray_origin, ray_dir)
    out = []
    for delta in deltas:
        if not 0.0 < delta <= t_hit:
            raise DomainError(f"delta must lie in (0, {t_hit}], got {delta!r}")
        # keep 1 - |x| = delta exact when the ray is radial
        if u.radial and np.allclose(o, 0.0):
            r = t_hit - delta
            val = float(u.radial_value(r))
        else:
            val = float(u.value(o + (t_hit - delta) * d))
        out.append((float(delta), val / delta ** s))
    return out


def ball_kernel_mass(dist: float, radius: float, n: int, sp: float,
                     cfg: Optional[QuadConfig] = None) -> float:
    """int_{|y| <= radius} |x - y|^(-n-sp) dy  for |x| = dist > radius.

    Integrated in polar coordinates around x: along a direction at angle
    theta from the centre the chord [r1, r2] contributes (r1^-sp - r2^-sp)/sp.
    """
    cfg = cfg or QuadConfig()
    if not dist > radius > 0:
        raise DomainError("need dist > radius > 0")
    if n == 1:
        return ((dist - radius) ** (-sp) - (dist + radius) ** (-sp)) / sp
    theta_max = math.asin(radius / dist)

    def f(theta):
        c, s_ = np.cos(theta), np.sin(theta)
        root = np.sqrt(np.maximum(radius * radius - (dist * s_) ** 2, 0.0))
        r1, r2 = dist * c - root, dist * c + root
        return s_ ** (n - 2) * (r1 ** (-sp) - r2 ** (-sp)) / sp

    # the chord shrinks like a square root at the tangent direction
    res = integrate(f, 0.0, theta_max, cfg, edges=(None, 0.5))
    return sphere_measure(n - 2) * res.value


@dataclass(frozen=True)
class HopfReport:
    """Measured constants of the barrier argument.

    The domain is the ball of radius ``domain_radius``, the small ball
    B_rho touches its boundary, and D = {dist(x, boundary) >= 3 rho}.
    """

    rho: float
    c0: float
    scaling_errs: tuple
    ratio_trace: tuple
    c_d: float
    c_rho: float
    eps_max: float
    lower_bound: float  # the barrier's bound as delta -> 0
    domain_radius: float = 1.0
    details: dict = field(default_factory=dict)

    @property
    def trace_above_bound(self) -> bool:
        """Whether the ratios with delta <= rho sit above the barrier's
        eps_max (2 rho - delta)^s / rho^(2s)."""
        s, rho = self.details["s"], self.rho
        return all(r >= self.eps_max * (2.0 * rho - d) ** s / rho ** (2.0 * s)
                   for d, r in self.ratio_trace if d <= rho)


def hopf_report(params: Params, rho: float = 0.1, cfg: Optional[QuadConfig] = None, *,
                domain_radius: float = 1.0, grid_size: int = 8,
                scaling_rhos: Sequence[float] = (0.5, 2.0, 5.0),
                scaling_x: float = 0.3,
                deltas: Sequence[float] = tuple(2.0 ** -j for j in range(1, 13)),
                c_d: Optional[float] = None) -> HopfReport:
    """Measure the barrier constants for the model solution u = bump of the domain.

    ``c0`` is the largest operator value of psi on a radial grid in [0, 1),
    ``C(rho)`` the smallest kernel mass of D seen from a grid in B_rho, and
    ``eps_max`` solves  eps^(p-1) c0 / rho^(sp) = 2^(2-p) C_D^(p-1) C(rho),
    capped below C_D.
    """
    cfg = cfg or QuadConfig()
    n, s, p, sp = params.n, params.s, params.p, params.sp
    if not 0 < 4.0 * rho < domain_radius:
        raise DomainError("need 0 < 4 rho < domain_radius so that D is non-empty")
    psi = Profile.bump(s)
    radii = np.linspace(0.0, 0.99, grid_size)
    c0 = max(float(operator_at(psi, r, params, cfg).value) for r in radii)
    scaling = tuple(scaling_check(r, scaling_x * r, params, cfg) for r in scaling_rhos)

    # model solution: the bump of the domain, positive inside
    u = Profile.scaled_bump(s, domain_radius)
    inner_radius = domain_radius - 3.0 * rho
    if c_d is None:
        c_d = float(u.radial_value(inner_radius))
    # B_rho is centred at distance domain_radius - rho from the origin
    centre = domain_radius - rho
    probe = centre + np.linspace(-rho, rho, 2 * grid_size + 1)[1:-1]
    c_rho = min(ball_kernel_mass(abs(x), inner_radius, n, sp, cfg) for x in probe)
    eps = (2.0 ** (2.0 - p) * c_d ** (p - 1.0) * c_rho * rho ** sp / c0) ** (1.0 / (p - 1.0))
    eps = min(eps, 0.999 * c_d)
    direction = np.zeros(n)
    direction[0] = 1.0
    trace = tuple(hopf_ratio(u, np.zeros(n), direction, deltas, s))
    lower = eps * (2.0 * rho) ** s / rho ** (2.0 * s)
    return HopfReport(rho, c0, scaling, trace, c_d, c_rho, eps, lower, domain_radius,
                      {"grid_radii": tuple(radii.tolist()), "scaling_rhos": tuple(scaling_rhos),
                       "s": s})


@dataclass(frozen=True)
class ComparisonReport:
    """Outcome of sampling the comparison principle on a grid.

    ``verdict`` is "consistent" when the operator inequality holds on the
    grid and so does u >= v, "hypothesis not met" when the sampled operator
    inequality fails somewhere, and "violation" when the hypotheses hold but
    u < v at some sample (listed in ``violations``).
    """

    verdict: str
    hypothesis_holds: bool
    conclusion_holds: bool
    n_points: int
    violations: tuple = ()
    hypothesis_failures: tuple = ()
    inconclusive: tuple = ()
    exterior_ok: bool = True


def comparison_probe(u: Profile, v: Profile, c_vals: Callable, domain_radius: float,
                     grid: Sequence, params: Params, cfg: Optional[QuadConfig] = None,
                     *, exterior_samples: int = 64) -> ComparisonReport:
    """Sample  L u + c u >= L v + c v  in the domain and u >= v on the grid.

    This is an empirical probe, not a proof. The exterior condition u >= v
    outside the ball of ``domain_radius`` is checked on ``exterior_samples``
    radii out to twice the larger support (or domain) radius.
    """
    cfg = cfg or QuadConfig()
    outer = max(domain_radius, *(r for r in (u.support_radius, v.support_radius)
                                 if math.isfinite(r)))
    ext = np.linspace(domain_radius, 2.0 * outer, exterior_samples + 1)[1:]
    if params.n == 1:
        pts = np.concatenate([ext, -ext])[:, None]
    else:
        pts = np.zeros((ext.size, params.n))
        pts[:, 0] = ext
    exterior_ok = bool(np.all(u.value(pts) >= v.value(pts)))

    violations, failures, inconclusive = [], [], []
    for x in grid:
        xv = np.asarray(x, dtype=float)
        if float(np.linalg.norm(np.atleast_1d(xv))) >= domain_radius:
            raise DomainError("grid points must lie inside the domain")
        uval = float(u.value(xv))
        vval = float(v.value(xv))
        try:
            lu = operator_at(u, xv, params, cfg)
            lv = lu if v is u else operator_at(v, xv, params, cfg)
        except (NonConvergence, DomainError):
            inconclusive.append(_as_point(xv))
            continue
        c = float(c_vals(xv))
        slack = lu.err_est + lv.err_est
        if lu.value + c * uval < lv.value + c * vval - slack:
            failures.append(_as_point(xv))
        if uval < vval:
            violations.append(_as_point(xv))
    hyp = exterior_ok and not failures
    concl = not violations
    if not hyp:
        verdict = "hypothesis not met"
    elif not concl:
        verdict = "violation"
    elif inconclusive:
        verdict = "inconclusive"
    else:
        verdict = "consistent"
    return ComparisonReport(verdict, hyp, concl, len(grid), tuple(violations),
                            tuple(failures), tuple(inconclusive), exterior_ok)


def _as_point(x: np.ndarray):
    return float(x) if x.ndim == 0 else tuple(float(t) for t in x)


def constructed_pairs(params: Params, grid: Sequence, cfg: Optional[QuadConfig] = None
                      ) -> list[tuple[str, Profile, Profile]]:
    """The pairs with analytically known ordering used to exercise the probe.

    Bump against half of itself, the bump against itself, and the bump
    against eps * psi_{1/2}. For the last pair eps is half the largest value
    keeping both u >= eps psi_{1/2} and L u >= eps^(p-1) L psi_{1/2} on
    the grid, so that the hypotheses hold by construction.
    """
    cfg = cfg or QuadConfig()
    s, p = params.s, params.p
    u = Profile.bump(s)
    small = Profile.scaled_bump(s, 0.5)
    pts = [np.asarray(x, dtype=float) for x in grid]
    sv = np.array([float(small.value(x)) for x in pts])
    uv = np.array([float(u.value(x)) for x in pts])
    inside = sv > 0
    if not np.any(inside):
        raise DomainError("no grid point inside the small bump")
    by_value = float(np.min(uv[inside] / sv[inside]))
    lu = min(operator_at(u, x, params, cfg).value for x in pts)
    ls = max(operator_at(small, x, params, cfg).value for x, ok in zip(pts, inside) if ok)
    by_operator = (lu / ls) ** (1.0 / (p - 1.0)) if ls > 0 and lu > 0 else math.inf
    eps = 0.5 * min(by_value, by_operator)
    return [
        ("half", u, u.scaled(0.5)),
        ("equal", u, u),
        ("shrunken", u, small.scaled(eps)),
    ]
