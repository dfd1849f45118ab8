"""One-dimensional fractional p-Laplacian evaluators.

``eval_direct_1d`` integrates the principal value directly: a paired inner
integral on (0, eta], one-sided integrals out to the support edge, and the
exact kernel tail where u vanishes. ``eval_decomposed_1d`` evaluates the
bump by the six-term near-boundary split I1..I6, in which I3 and I4 are
written in the stretched variable k = 2xz / (1 - x^2). The two routes share
no integrand code, so they check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._brackets import bracket_gap, g_gap
from .errors import DomainError
from .model import BUMP, POWER_CUSP, Params, Profile, g_power
from .quad import QuadConfig, QuadResult, integrate, line_drop, line_pair

__all__ = [
    "EvalResult",
    "eval_direct_1d",
    "eval_decomposed_1d",
    "eval_outside_1d",
    "evaluate_1d",
    "symmetry_reduce",
    "line_operator",
    "pairing_radius",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class EvalResult:
    value: float
    err_est: float
    n_evals: int
    terms: Optional[dict] = field(default=None, compare=False)
    method: str = ""

    def scaled(self, factor: float) -> "EvalResult":
        terms = None if self.terms is None else {k: v * factor for k, v in self.terms.items()}
        return EvalResult(self.value * factor, self.err_est * abs(factor), self.n_evals,
                          terms, self.method)


def symmetry_reduce(x: float) -> float:
    """The operator of the bump is even, so evaluators only need |x|."""
    if not abs(x) < 1.0:
        raise DomainError(f"|x| must be < 1, got {x!r}")
    return abs(x)


def pairing_radius(dist: float, cfg: QuadConfig) -> float:
    return min(0.1, cfg.pv_radius_frac * dist)


def _finish(parts: dict[str, QuadResult], closed: dict[str, float], c_norm: float,
            method: str) -> EvalResult:
    terms = {k: r.value for k, r in parts.items()}
    terms.update(closed)
    total = math.fsum(terms.values())
    err = sum(r.err_est for r in parts.values())
    err += 4.0 * _EPS * math.fsum(abs(v) for v in terms.values())
    n = sum(r.n_evals for r in parts.values())
    terms = {k: c_norm * v for k, v in terms.items()}
    return EvalResult(c_norm * total, c_norm * err, n, terms, method)


def line_operator(drop: Callable, u0: float, r_plus: float, r_minus: float,
                  eta: float, params: Params, cfg: QuadConfig, *,
                  edge: Optional[float] = None, breaks_plus=(), breaks_minus=(),
                  pair: Optional[Callable] = None) -> dict[str, QuadResult | float]:
    """PV of  int_R G(drop(z)) |z|^(-1-sp) dz  along a line, where
    ``drop(z) = u0 - u(x + z e)`` and u vanishes beyond ``r_plus`` and
    below ``-r_minus``.

    ``breaks_plus``/``breaks_minus`` are distances at which G(drop) has a
    kink on either side. ``pair`` (from ``quad.line_pair``) supplies scaled
    differences that keep the paired integrand accurate as z -> 0. Returns
    the pieces ``inner`` (paired, on (0, eta]),
    ``outer`` (one-sided, out to the support edges) and the closed-form
    ``tail``.
    """
    p, sp = params.p, params.sp

    if pair is None:
        def paired(z):
            return (g_power(drop(z), p) + g_power(drop(-z), p)) / z ** (1.0 + sp)
    else:
        def paired(z):
            # G is (p-1)-homogeneous: G(dp) - G(-dm) = z^(p-1) (G(dp/z) - G(-dm/z))
            a, b, s2 = pair(z)
            return z ** (p - 2.0 - sp) * g_gap(a, b, z * s2, p)

    def right(z):
        return g_power(drop(z), p) / z ** (1.0 + sp)

    def left(z):
        return g_power(drop(-z), p) / z ** (1.0 + sp)

    kink = None if float(p - 1.0).is_integer() else p - 1.0
    near = [b for b in (*breaks_plus, *breaks_minus) if 0.0 < b < eta]
    inner = integrate(paired, 0.0, eta, cfg, edges=(p - 1.0 - sp, None),
                      breaks=near, break_edge=kink)
    outer_r = integrate(right, eta, r_plus, cfg, edges=(None, edge), decay=1.0 + sp,
                        breaks=breaks_plus, break_edge=kink)
    outer_l = integrate(left, eta, r_minus, cfg, edges=(None, edge), decay=1.0 + sp,
                        breaks=breaks_minus, break_edge=kink)
    g0 = float(g_power(u0, p))
    tail = 0.0
    for r in (r_plus, r_minus):
        if math.isfinite(r):
            tail += g0 * r ** (-sp) / sp
    return {"inner": inner, "outer": outer_r + outer_l, "tail": tail}


def _check_1d(params: Params, u: Optional[Profile] = None):
    if params.n != 1:
        raise DomainError(f"this evaluator needs n = 1, got n = {params.n}")
    if u is not None and u.kind == POWER_CUSP:
        raise DomainError("power-cusp profiles are not C^{1,1}; no operator evaluation")


def eval_direct_1d(u: Profile, x: float, params: Params,
                   cfg: Optional[QuadConfig] = None) -> EvalResult:
    """(-Delta)^s_p u(x) in one dimension by direct principal-value quadrature."""
    cfg = cfg or QuadConfig()
    _check_1d(params, u)
    x = float(x)
    R = u.support_radius
    if not abs(x) < R:
        raise DomainError("x outside open support")
    eta = pairing_radius(R - abs(x), cfg)
    u0 = float(u.value(x))

    drop = line_drop(u, x, 1.0)
    bp, bm = (), ()
    if u.radial and x != 0.0:
        # u(-x) = u(x): G changes sign there
        if x > 0:
            bm = (2.0 * x,)
        else:
            bp = (-2.0 * x,)
    parts = line_operator(drop, u0, R - x, R + x, eta, params, cfg,
                          edge=u.edge_exponent, breaks_plus=bp, breaks_minus=bm,
                          pair=line_pair(u, x, 1.0))
    tail = parts.pop("tail")
    return _finish(parts, {"tail": tail}, params.c_norm, "direct")


def eval_outside_1d(u: Profile, x: float, params: Params,
                    cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Operator value at a point outside the (closed) support, where u(x) = 0."""
    cfg = cfg or QuadConfig()
    _check_1d(params, u)
    x = float(x)
    R = u.support_radius
    if not abs(x) > R:
        raise DomainError("x must lie strictly outside the support")
    p, sp = params.p, params.sp
    u0 = float(u.value(x))

    def f(y):
        return g_power(u0 - u.value(y[..., None]), p) / np.abs(x - y) ** (1.0 + sp)

    edge = None if u.edge_exponent is None else u.edge_exponent * (p - 1.0)
    res = integrate(f, -R, R, cfg, edges=(edge, edge))
    return _finish({"support": res}, {}, params.c_norm, "outside")


def _bump_bracket_minus(k, c, s):
    """1 - (1 - k - c k^2)^s, accurate for small k."""
    arg = np.maximum(-k - c * k * k, -1.0)
    with np.errstate(divide="ignore"):
        return -np.expm1(s * np.log1p(arg))


def _bump_bracket_plus(k, c, s):
    """(1 + k - c k^2)^s - 1, accurate for small k."""
    return np.expm1(s * np.log1p(k - c * k * k))


def _geometric_breaks(lo: float, hi: float) -> list[float]:
    if lo <= 0 or hi / lo <= 16.0:
        return []
    m = int(math.log2(hi / lo) / 2)
    return list(np.geomspace(lo, hi, m + 1)[1:-1])


def eval_decomposed_1d(s_exp: float, x: float, params: Params,
                       cfg: Optional[QuadConfig] = None) -> EvalResult:
    """Bump operator at x in (0, 1) through the six-term split.

    I1 + I6 are exact, I2 and I5 are one-sided integrals over the far side of
    the support, I3 is the paired near field in the stretched variable and
    I4 is its exact leading part minus a quadrature remainder.
    """
    cfg = cfg or QuadConfig()
    _check_1d(params)
    if abs(s_exp - params.s) > 1e-15:
        raise DomainError("the decomposition needs the bump exponent equal to s")
    x = float(x)
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x!r}")
    s, p, sp = params.s, params.p, params.sp
    q = (1.0 - x) * (1.0 + x)
    u0 = q ** s
    lead = q ** (s * (p - 1.0))
    stretch = (2.0 * x) ** sp / q ** s
    c = q / (4.0 * x * x)
    kink = None if float(p - 1.0).is_integer() else p - 1.0

    def far_side(z):
        # y = x - z runs over the left half of the support
        base = np.maximum((1.0 - x + z) * (1.0 + x - z), 0.0)
        return g_power(u0 - base ** s, p) / z ** (1.0 + sp)

    def near_pair(k):
        gap = bracket_gap(s, -k - c * k * k, k - c * k * k,
                          -k * k * (1.0 + 2.0 * c - c * c * k * k))
        return g_gap(_bump_bracket_minus(k, c, s), _bump_bracket_plus(k, c, s),
                     gap, p) / k ** (1.0 + sp)

    def near_left(k):
        return g_power(_bump_bracket_plus(k, c, s), p) / k ** (1.0 + sp)

    i2 = integrate(far_side, 2.0 * x, 1.0 + x, cfg, edges=(kink, s))
    i5 = integrate(far_side, 1.0, 2.0 * x, cfg, edges=(None, kink))
    k3 = 2.0 * x / (1.0 + x)
    i3 = integrate(near_pair, 0.0, k3, cfg.with_abs_tol(cfg.abs_tol / stretch),
                   edges=(p - 1.0 - sp, s)).scaled(stretch)
    k4 = 2.0 * x / q
    rem = integrate(near_left, k3, k4, cfg.with_abs_tol(cfg.abs_tol / stretch),
                    breaks=_geometric_breaks(k3, k4)).scaled(stretch)
    i4_lead = lead * ((1.0 - x) ** (-sp) - 1.0) / sp
    i4 = QuadResult(i4_lead - rem.value, rem.err_est + 4.0 * _EPS * abs(i4_lead),
                    rem.n_evals, rem.converged)
    closed = {
        "I1": lead / (sp * (1.0 + x) ** sp),
        "I6": lead / sp,
    }
    parts = {"I2": i2, "I3": i3, "I4": i4, "I5": i5}
    out = _finish(parts, closed, params.c_norm, "decomposed")
    order = ("I1", "I2", "I3", "I4", "I5", "I6")
    return EvalResult(out.value, out.err_est, out.n_evals,
                      {k: out.terms[k] for k in order}, out.method)


def evaluate_1d(u: Profile, x: float, params: Params, cfg: Optional[QuadConfig] = None,
                method: str = "auto") -> EvalResult:
    """Dispatch between the evaluators.

    ``auto`` uses the decomposition for the bump beyond |x| = 0.99 (where the
    direct pairing radius collapses), the exterior integral outside the
    support and the direct route elsewhere.
    """
    cfg = cfg or QuadConfig()
    R = u.support_radius
    if abs(x) > R:
        return eval_outside_1d(u, x, params, cfg)
    if method == "direct":
        return eval_direct_1d(u, x, params, cfg)
    is_bump = (u.kind == BUMP and abs(u.s_exp - params.s) <= 1e-15)
    if method == "decomposed" or (method == "auto" and is_bump and 0.99 < abs(x) < 1.0):
        if not is_bump:
            raise DomainError("the decomposition is only available for the bump")
        if x == 0.0:
            raise DomainError("the decomposition needs x != 0")
        return eval_decomposed_1d(u.s_exp, symmetry_reduce(x), params, cfg).scaled(
            u.amplitude ** (params.p - 1.0))
    if method != "auto":
        raise DomainError(f"unknown method {method!r}")
    return eval_direct_1d(u, x, params, cfg)
