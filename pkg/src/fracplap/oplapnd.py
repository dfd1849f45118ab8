"""Fractional p-Laplacian of radial profiles in dimension n >= 2.

The evaluation point is put on the first axis, x = r0 e1. Writing
y = (y1, ybar) with rho = |ybar| collapses the transverse directions to the
weight omega * rho^(n-2), where omega is the measure of the unit sphere
S^(n-2) (two points when n = 2). The principal value at (r0, 0) is taken by
pairing y1 = r0 + t with y1 = r0 - t in the inner integral.

``eval_cartesian_2d`` is an independent and slower oracle. It integrates in
polar coordinates around x and pairs antipodal directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from .errors import DomainError
from .model import POWER_CUSP, Params, Profile, g_power
from .oplap1d import EvalResult, line_operator, pairing_radius
from ._brackets import g_gap
from .quad import (QuadConfig, QuadResult, integrate, iterated, line_drop, line_pair,
                   radial_pair_sum)

__all__ = [
    "RadialReduction",
    "sphere_measure",
    "eval_radial_nd",
    "eval_outside_nd",
    "eval_cartesian_2d",
    "kernel_moment",
    "kernel_moment_beta",
]

_EPS = np.finfo(float).eps


def sphere_measure(k: int) -> float:
    """Surface measure of the unit sphere S^k in R^(k+1); S^0 has measure 2."""
    if k < 0:
        raise DomainError("sphere dimension must be >= 0")
    return 2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0)


@dataclass(frozen=True)
class RadialReduction:
    """Geometry of the (y1, rho) reduction at radius ``r0`` in dimension ``n``."""

    r0: float
    n: int

    def __post_init__(self):
        if self.r0 < 0:
            raise DomainError("r0 must be nonnegative")
        if self.n < 2:
            raise DomainError("the reduction needs n >= 2")

    @property
    def omega(self) -> float:
        return sphere_measure(self.n - 2)

    @property
    def singular_point(self) -> tuple[float, float]:
        return (self.r0, 0.0)


def _tail_upper(T, rho, a):
    """int_T^inf (t^2 + rho^2)^(-a) dt for a > 1/2."""
    half_b = 0.5 * special.beta(0.5, a - 0.5)
    if math.isinf(T):
        return 0.0
    return rho ** (1.0 - 2.0 * a) * half_b * special.betainc(
        a - 0.5, 0.5, rho * rho / (rho * rho + T * T))


def _tail_lower(T, rho, a):
    """int_0^T (t^2 + rho^2)^(-a) dt, without the cancellation of F(0) - F(T)."""
    half_b = 0.5 * special.beta(0.5, a - 0.5)
    if math.isinf(T):
        return rho ** (1.0 - 2.0 * a) * half_b
    return rho ** (1.0 - 2.0 * a) * half_b * special.betainc(
        0.5, a - 0.5, T * T / (rho * rho + T * T))


def _geometric_points(lo: float, hi: float, ratio: float = 4.0) -> list[float]:
    out = []
    t = lo * ratio
    while t < hi:
        out.append(t)
        t *= ratio
    return out


def _reduced_integral(u: Profile, r0: float, params: Params, cfg: QuadConfig):
    """The paired (t, rho) integral, without the omega and c_norm factors.

    Returns ``(near, far)``: the quadrature over rho < R and the exact
    contribution of rho >= R (where u vanishes on the whole line).
    """
    n, p, sp = params.n, params.p, params.sp
    a = 0.5 * (n + sp)
    R = u.support_radius
    u0 = float(u.radial_value(r0))
    g0 = float(g_power(u0, p))
    edge_s = u.edge_exponent
    kink = None if float(p - 1.0).is_integer() else p - 1.0
    finite = math.isfinite(R)
    inner_cfg = cfg.tightened(10.0 * max(1.0, R if finite else 1.0))
    pair_sum = radial_pair_sum(u, r0)

    def inner(rho: float) -> QuadResult:
        if rho <= 0.0:
            return QuadResult(0.0, 0.0, 0, True)
        rsq = rho * rho

        def f(t):
            sq_p = t * (2.0 * r0 + t) + rsq
            sq_m = t * (t - 2.0 * r0) + rsq
            dp = u.radial_drop(r0, sq_p)
            dm = u.radial_drop(r0, sq_m)
            if pair_sum is None:
                top = g_power(dp, p) + g_power(dm, p)
            else:
                top = g_gap(dp, -dm, pair_sum(sq_p, sq_m, 2.0 * (t * t + rsq), dp + dm), p)
            return top / (t * t + rsq) ** a

        if finite:
            Y = math.sqrt(max((R - rho) * (R + rho), 0.0))
            start = max(r0 - Y, 0.0)
            end = r0 + Y
        else:
            Y = start = 0.0
            end = math.inf
        closed = 0.0
        if start > 0.0:
            # both paired points lie outside the support
            closed += 2.0 * g0 * _tail_lower(start, rho, a)
        if finite:
            closed += 2.0 * g0 * _tail_upper(end, rho, a)
        pts, eds = [], []
        if finite and Y - r0 > start:
            pts.append(Y - r0)
            eds.append(edge_s)
        if rho < r0:
            root = math.sqrt((r0 - rho) * (r0 + rho))
            # G changes sign where the left point crosses the sphere |y| = r0
            pts += [rsq / (r0 + root), r0 + root]
            eds += [kink, kink]
        # geometric points up to the support scale: for r0 -> 0 the kernel
        # decays over many decades between rho and R, and a single rule on
        # that stretch can agree with its embedded rule and still miss mass
        reach = 16.0 * max(r0, rho) if not finite else max(16.0 * max(r0, rho), R)
        scale = [rho] + _geometric_points(rho, min(end, reach))
        pts += scale
        eds += [None] * len(scale)
        lo_edge = edge_s if start > 0.0 else None
        res = integrate(f, start, end, inner_cfg, edges=(lo_edge, edge_s),
                        decay=2.0 * a, breaks=pts, break_edge=eds, raise_on_fail=False)
        w = rho ** (n - 2) if n > 2 else 1.0
        return QuadResult(w * (res.value + closed),
                          w * (res.err_est + 4.0 * _EPS * abs(closed)),
                          res.n_evals, res.converged)

    outer_breaks = []
    if finite:
        if r0 < R:
            outer_breaks += [math.sqrt((R - r0) * (R + r0)), R - r0]
        if 0.0 < r0 < R:
            outer_breaks.append(r0)
        top, top_edge, decay = R, 0.5, None
    else:
        outer_breaks += [r0] if r0 > 0 else []
        top, top_edge, decay = math.inf, None, 1.0 + sp
    # the axis carries rho^(p-1-sp); when that exponent is >= 0 a log rho
    # term can appear instead, and a square-root stretch is used
    axis = p - 1.0 - sp if p - 1.0 - sp < -1e-9 else -0.5
    near = iterated(inner, 0.0, top, cfg, edges=(axis, top_edge), decay=decay,
                    breaks=sorted(set(outer_breaks)))
    far = 0.0
    if finite:
        far = 2.0 * g0 * 0.5 * special.beta(0.5, a - 0.5) * R ** (-sp) / sp
    return near, far


def eval_radial_nd(u: Profile, r0: float, params: Params,
                   cfg: Optional[QuadConfig] = None) -> EvalResult:
    """(-Delta)^s_p u at any point of radius ``r0`` for a radial profile, n >= 2."""
    cfg = cfg or QuadConfig()
    if params.n < 2:
        raise DomainError("eval_radial_nd needs n >= 2")
    if not u.radial or u.kind == POWER_CUSP:
        raise DomainError("eval_radial_nd needs a radial C^{1,1} profile")
    r0 = float(r0)
    if r0 < 0.0:
        raise DomainError("r0 must be nonnegative")
    if not r0 < u.support_radius:
        raise DomainError("x outside open support")
    return _assemble(u, r0, params, cfg, "radial")


def eval_outside_nd(u: Profile, r0: float, params: Params,
                    cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Operator value at radius ``r0`` strictly outside the support, n >= 2."""
    cfg = cfg or QuadConfig()
    if params.n < 2 or not u.radial or u.kind == POWER_CUSP:
        raise DomainError("eval_outside_nd needs n >= 2 and a radial profile")
    if not r0 > u.support_radius:
        raise DomainError("r0 must lie strictly outside the support")
    return _assemble(u, float(r0), params, cfg, "outside")


def _assemble(u, r0, params, cfg, method) -> EvalResult:
    near, far = _reduced_integral(u, r0, params, cfg)
    omega = sphere_measure(params.n - 2) * params.c_norm
    value = omega * (near.value + far)
    err = omega * (near.err_est + 4.0 * _EPS * (abs(near.value) + abs(far)))
    terms = {"near": omega * near.value, "far": omega * far}
    return EvalResult(value, err, near.n_evals, terms, method)


def eval_cartesian_2d(u: Profile, x, params: Params,
                      cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Brute-force 2D oracle: polar coordinates centred at ``x``.

    For each direction theta in [0, pi) the full-line principal value along
    e_theta is computed with antipodal pairing, then integrated over theta.
    """
    cfg = cfg or QuadConfig(abs_tol=1e-8, rel_tol=1e-4)
    if params.n != 2:
        raise DomainError("eval_cartesian_2d needs n = 2")
    if u.kind == POWER_CUSP:
        raise DomainError("power-cusp profiles are not C^{1,1}")
    x = np.asarray(x, dtype=float).reshape(2)
    R = u.support_radius
    r = float(np.hypot(*x))
    if not r < R:
        raise DomainError("x outside open support")
    u0 = float(u.value(x))
    eta = pairing_radius(R - r, cfg)
    line_cfg = cfg.tightened(10.0 * math.pi)

    def along(theta: float) -> QuadResult:
        e = np.array([math.cos(theta), math.sin(theta)])
        xe = float(x @ e)
        if math.isfinite(R):
            root = math.sqrt(max(xe * xe + (R - r) * (R + r), 0.0))
            r_plus, r_minus = root - xe, root + xe
        else:
            r_plus = r_minus = math.inf
        bp, bm = (), ()
        if u.radial and xe != 0.0:
            # |x + z e| = |x| again at z = -2 x.e
            if xe > 0:
                bm = (2.0 * xe,)
            else:
                bp = (-2.0 * xe,)
        parts = line_operator(line_drop(u, x, e), u0, r_plus, r_minus, eta, params,
                              line_cfg, edge=u.edge_exponent, breaks_plus=bp,
                              breaks_minus=bm, pair=line_pair(u, x, e))
        res = parts["inner"] + parts["outer"]
        return QuadResult(res.value + parts["tail"], res.err_est, res.n_evals,
                          res.converged)

    # D(theta) is not smooth where x.e = 0 (the kink reaches z = 0)
    perp = []
    if u.radial and r > 0.0:
        perp = [(math.atan2(x[1], x[0]) + 0.5 * math.pi) % math.pi]
    res = iterated(along, 0.0, math.pi, cfg, breaks=perp)
    c = params.c_norm
    err = res.err_est + 4.0 * _EPS * abs(res.value)
    return EvalResult(c * res.value, c * err, res.n_evals, None, "cartesian")


def kernel_moment(n: int, s: float, p: float, cfg: Optional[QuadConfig] = None) -> float:
    """int_0^inf y^(n-2) (1 + y^2)^(-(n+sp)/2) dy by quadrature (tail mapped)."""
    cfg = cfg or QuadConfig()
    if n < 2:
        raise DomainError("kernel_moment needs n >= 2")
    params = Params(n, s, p)
    a = 0.5 * (n + params.sp)

    def f(y):
        return y ** (n - 2) / (1.0 + y * y) ** a

    return integrate(f, 0.0, math.inf, cfg, decay=2.0 * a - (n - 2)).value


def kernel_moment_beta(n: int, s: float, p: float) -> float:
    """Closed form 1/2 B((n-1)/2, (sp+1)/2) of :func:`kernel_moment`."""
    if n < 2:
        raise DomainError("kernel_moment needs n >= 2")
    sp = Params(n, s, p).sp
    return 0.5 * float(special.beta(0.5 * (n - 1), 0.5 * (sp + 1.0)))
