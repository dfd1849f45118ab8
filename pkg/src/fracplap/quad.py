"""Deterministic adaptive Gauss-Kronrod quadrature.

The engine integrates vectorized callables (``f(ndarray) -> ndarray``) over
finite or semi-infinite intervals. Endpoint behaviour of algebraic type
``f ~ (x - a)^beta`` is declared by the caller through ``edges``; a power
substitution ``x = a + (b - a) t^k`` is then applied so the transformed
integrand is smooth (or at least bounded) at the endpoint. Tails are mapped
by ``z -> 1/z``.

All intervals of all pieces of one call are refined together against a
single global tolerance, so the reported ``err_est`` is the sum of the
per-interval Kronrod-Gauss differences (floored by a roundoff term).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from ._brackets import bracket_gap
from .errors import DomainError, EvaluationError, NonConvergence
from .model import BUMP, SCALED_BUMP, Params, Profile, g_power

__all__ = [
    "QuadConfig",
    "QuadResult",
    "integrate",
    "integrate2d_iterated",
    "line_drop",
    "pv_paired_integrand",
    "substitution_power",
]

# 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GAUSS_IDX = np.array([1, 3, 5, 7, 9, 11, 13])
GAUSS_WEIGHTS = np.concatenate([_WG[:-1], [_WG[-1]], _WG[-2::-1]])
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    max_depth: int = 60
    pv_radius_frac: float = 0.25
    far_field_map: bool = True
    max_intervals: int = 4000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if not 0.0 < self.pv_radius_frac <= 0.5:
            raise DomainError("pv_radius_frac must lie in (0, 0.5]")
        if self.max_depth < 1 or self.max_intervals < 1:
            raise DomainError("max_depth and max_intervals must be >= 1")

    def tightened(self, factor: float) -> "QuadConfig":
        """Both tolerances divided by ``factor``."""
        return replace(self, abs_tol=self.abs_tol / factor, rel_tol=self.rel_tol / factor)

    def with_abs_tol(self, abs_tol: float) -> "QuadConfig":
        return replace(self, abs_tol=abs_tol)


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    n_evals: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(self.value + other.value, self.err_est + other.err_est,
                          self.n_evals + other.n_evals, self.converged and other.converged)

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(self.value * factor, self.err_est * abs(factor),
                          self.n_evals, self.converged)


ZERO = QuadResult(0.0, 0.0, 0, True)


def substitution_power(beta: Optional[float]) -> float:
    """Exponent k of the substitution x - a = (b - a) t^k for an endpoint
    where the integrand behaves like (x - a)^beta."""
    if beta is None:
        return 1.0
    if beta <= -1.0:
        raise DomainError(f"endpoint exponent {beta} is not integrable")
    if beta < 0.0:
        return 1.0 / (1.0 + beta)
    if float(beta).is_integer():
        return 1.0
    return 2.0


class _Piece:
    """A transformed integrand g on [0, 1] (or [lo, hi]) with sorted intervals."""

    __slots__ = ("g", "lo", "hi", "a", "b", "val", "err", "depth")

    def __init__(self, g, lo, hi):
        self.g = g
        self.lo = lo
        self.hi = hi


def _gk15(g, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(g(x.ravel()), dtype=float)
    if fx.shape != (x.size,):
        fx = np.broadcast_to(fx, (x.size,)).astype(float)
    fx = fx.reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        bad = x[~np.isfinite(fx)][0]
        raise EvaluationError(f"integrand is not finite at interior node {bad!r}")
    kron = h * (fx @ KRONROD_WEIGHTS)
    gauss = h * (fx[:, _GAUSS_IDX] @ GAUSS_WEIGHTS)
    absint = np.abs(h) * (np.abs(fx) @ KRONROD_WEIGHTS)
    err = np.maximum(np.abs(kron - gauss), 50.0 * _EPS * absint)
    return kron, err


def _split_plan(pieces: list[_Piece], err: float, tol: float, max_depth: int):
    """Mark the intervals with the largest error estimates for bisection,
    just enough of them that the unmarked ones sum to at most tol / 2.

    Ties are broken by position (stable sort), so the plan is deterministic.
    """
    errs = np.concatenate([pc.err for pc in pieces])
    ok = np.concatenate([pc.depth < max_depth for pc in pieces])
    order = np.argsort(-np.where(ok, errs, -1.0), kind="stable")
    order = order[ok[order]]
    left = err - np.cumsum(errs[order])
    reach = np.flatnonzero(left <= 0.5 * tol)
    count = int(reach[0]) + 1 if reach.size else order.size
    flat = np.zeros(errs.size, dtype=bool)
    flat[order[:count]] = True
    plans, start = [], 0
    for pc in pieces:
        plans.append(flat[start:start + len(pc.a)])
        start += len(pc.a)
    return plans


def _adaptive(pieces: list[_Piece], cfg: QuadConfig) -> QuadResult:
    n_evals = 0
    for pc in pieces:
        pc.a = np.array([pc.lo])
        pc.b = np.array([pc.hi])
        pc.val, pc.err = _gk15(pc.g, pc.a, pc.b)
        pc.depth = np.zeros(1, dtype=int)
        n_evals += 15
    while True:
        value = math.fsum(v for pc in pieces for v in pc.val)
        err = math.fsum(e for pc in pieces for e in pc.err)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(value))
        if err <= tol:
            return QuadResult(value, err, n_evals, True)
        n_intervals = sum(len(pc.a) for pc in pieces)
        plans = _split_plan(pieces, err, tol, cfg.max_depth)
        n_new = sum(int(split.sum()) for split in plans)
        if n_new == 0 or n_intervals + n_new > cfg.max_intervals:
            return QuadResult(value, err, n_evals, False)
        for pc, split in zip(pieces, plans):
            if not split.any():
                continue
            idx = np.flatnonzero(split)
            keep = ~split
            mid = 0.5 * (pc.a[idx] + pc.b[idx])
            na = np.concatenate([pc.a[idx], mid])
            nb = np.concatenate([mid, pc.b[idx]])
            nval, nerr = _gk15(pc.g, na, nb)
            n_evals += 15 * len(na)
            nd = np.concatenate([pc.depth[idx], pc.depth[idx]]) + 1
            a = np.concatenate([pc.a[keep], na])
            order = np.argsort(a, kind="stable")
            pc.a = a[order]
            pc.b = np.concatenate([pc.b[keep], nb])[order]
            pc.val = np.concatenate([pc.val[keep], nval])[order]
            pc.err = np.concatenate([pc.err[keep], nerr])[order]
            pc.depth = np.concatenate([pc.depth[keep], nd])[order]


def _power_piece(f, a, b, k, side):
    span = b - a
    if k == 1.0:
        return _Piece(f, a, b)
    if side == "left":
        def g(t):
            return f(a + span * t ** k) * (span * k * t ** (k - 1.0))
    else:
        def g(t):
            return f(b - span * t ** k) * (span * k * t ** (k - 1.0))
    return _Piece(g, 0.0, 1.0)


def _finite_pieces(f, a, b, beta_a, beta_b) -> list[_Piece]:
    ka = substitution_power(beta_a)
    kb = substitution_power(beta_b)
    if ka == 1.0 and kb == 1.0:
        return [_Piece(f, a, b)]
    # the substituted half only covers its own end, so nodes near the other
    # end keep their relative resolution there
    m = 0.5 * (a + b)
    return [_power_piece(f, a, m, ka, "left"), _power_piece(f, m, b, kb, "right")]


def _tail_pieces(f, a, beta_a, decay, cfg) -> list[_Piece]:
    """Pieces for [a, inf) with a > 0."""
    beta_t = None if decay is None else decay - 2.0
    if cfg.far_field_map:
        def g(t):
            return f(1.0 / t) / (t * t)
        # t in (0, 1/a]; decay sits at t = 0, the original a at t = 1/a
        return _finite_pieces(g, 0.0, 1.0 / a, beta_t, beta_a)

    def g(t):
        return f(a + t / (1.0 - t)) / ((1.0 - t) ** 2)
    return _finite_pieces(g, 0.0, 1.0, beta_a, beta_t)


def _build_pieces(f, a, b, edges, decay, cfg, breaks, break_edge) -> list[_Piece]:
    beta_a, beta_b = edges
    if math.isinf(a):
        raise DomainError("lower limit must be finite (reflect the integrand instead)")
    if isinstance(break_edge, (list, tuple)):
        if len(break_edge) != len(breaks):
            raise DomainError("break_edge sequence must match breaks")
        pairs = [(float(c), e) for c, e in zip(breaks, break_edge)]
    else:
        pairs = [(float(c), break_edge) for c in breaks]
    inner = sorted((ce for ce in pairs if a < ce[0] < b), key=lambda ce: ce[0])
    knots = [(a, beta_a)] + inner + [(b, beta_b)]
    pieces: list[_Piece] = []
    for (lo, ea), (hi, eb) in zip(knots[:-1], knots[1:]):
        if hi <= lo:
            continue
        if math.isinf(hi):
            if lo > 0.0 or not cfg.far_field_map:
                pieces += _tail_pieces(f, lo, ea, decay, cfg)
            else:
                c = 1.0 if lo < 1.0 else lo + 1.0
                pieces += _finite_pieces(f, lo, c, ea, None)
                pieces += _tail_pieces(f, c, None, decay, cfg)
        else:
            pieces += _finite_pieces(f, lo, hi, ea, eb)
    return pieces


def integrate(f: Callable, a: float, b: float, cfg: Optional[QuadConfig] = None, *,
              edges: tuple = (None, None), decay: Optional[float] = None,
              breaks: Sequence[float] = (), break_edge: Optional[float] = None,
              raise_on_fail: bool = True) -> QuadResult:
    """Integrate the vectorized callable ``f`` from ``a`` to ``b``.

    ``edges=(beta_a, beta_b)`` declares ``f ~ (x-a)^beta_a`` and
    ``f ~ (b-x)^beta_b`` at the endpoints (``None`` for regular ends).
    For ``b = inf``, ``decay`` declares ``f ~ x^(-decay)``. ``breaks`` are
    interior points where ``f`` is not smooth; ``break_edge`` is the
    exponent declared on both sides of each break (one value for all, or a
    sequence matching ``breaks``). ``a > b`` gives the
    oriented integral.

    Raises :class:`NonConvergence` (unless ``raise_on_fail`` is false, in
    which case ``converged=False`` is returned) and
    :class:`EvaluationError` for non-finite integrand values.
    """
    cfg = cfg or QuadConfig()
    if math.isnan(a) or math.isnan(b):
        raise DomainError("integration limits must not be NaN")
    if a == b:
        return ZERO
    if a > b:
        res = integrate(f, b, a, cfg, edges=(edges[1], edges[0]), decay=decay,
                        breaks=breaks, break_edge=break_edge, raise_on_fail=raise_on_fail)
        return res.scaled(-1.0)
    if math.isinf(a):
        def fr(x):
            return f(-x)
        if math.isinf(b):
            return integrate(f, 0.0, math.inf, cfg, edges=(None, None), decay=decay,
                             breaks=breaks, break_edge=break_edge,
                             raise_on_fail=raise_on_fail) + integrate(
                fr, 0.0, math.inf, cfg, decay=decay, breaks=[-c for c in breaks],
                break_edge=break_edge, raise_on_fail=raise_on_fail)
        return integrate(fr, -b, math.inf, cfg, edges=(edges[1], None), decay=decay,
                         breaks=[-c for c in breaks], break_edge=break_edge,
                         raise_on_fail=raise_on_fail)
    pieces = _build_pieces(f, float(a), float(b), edges, decay, cfg, breaks, break_edge)
    res = _adaptive(pieces, cfg)
    if raise_on_fail and not res.converged:
        raise NonConvergence(
            f"quadrature on [{a}, {b}] stopped at err_est={res.err_est:.3e} "
            f"(value={res.value:.16g})", res)
    return res


def integrate2d_iterated(f: Callable, outer: tuple, inner: tuple,
                         cfg: Optional[QuadConfig] = None, *,
                         outer_edges: tuple = (None, None),
                         inner_edges: tuple = (None, None),
                         outer_decay: Optional[float] = None,
                         raise_on_fail: bool = True) -> QuadResult:
    """Iterated integral of ``f(w, y)`` over ``w in outer``, ``y in inner(w)``.

    ``inner`` is a pair of limits, each a constant or a callable of ``w``.
    ``f`` must be vectorized in ``y`` for scalar ``w``. See :func:`iterated`
    for the error accounting.
    """
    cfg = cfg or QuadConfig()
    a, b = outer
    c, d = inner
    lo = c if callable(c) else (lambda w, c=c: c)
    hi = d if callable(d) else (lambda w, d=d: d)
    inner_cfg = cfg.tightened(10.0 * max(1.0, abs(b - a) if math.isfinite(b - a) else 1.0))

    def run_inner(w):
        return integrate(lambda y: f(w, y), lo(w), hi(w), inner_cfg,
                         edges=inner_edges, raise_on_fail=False)

    return iterated(run_inner, a, b, cfg, edges=outer_edges, decay=outer_decay,
                    raise_on_fail=raise_on_fail)


def _error_exponent(w1, w2, e1, e2) -> Optional[float]:
    if w1 > 0.0 and e1 > 0.0 and e2 > 0.0 and w2 > w1:
        return math.log(e2 / e1) / math.log(w2 / w1)
    return None


def _error_between(w1, w2, e1, e2) -> float:
    """Integral over [w1, w2] of an error profile through (w1, e1), (w2, e2).

    Inner errors near a singular outer endpoint follow a power of w across
    decades, where the straight chord overstates the area by orders of
    magnitude. A power law through both points is used when it is defined,
    the chord otherwise.
    """
    gamma = _error_exponent(w1, w2, e1, e2)
    if gamma is None:
        return 0.5 * (e1 + e2) * (w2 - w1)
    if abs(gamma + 1.0) < 1e-12:
        return e1 * w1 * math.log(w2 / w1)
    return (w2 * e2 - w1 * e1) / (gamma + 1.0)


def iterated(inner: Callable[[float], QuadResult], a: float, b: float,
             cfg: QuadConfig, *, edges=(None, None), decay=None, breaks=(),
             break_edge=None, raise_on_fail: bool = True) -> QuadResult:
    """Outer integration of a scalar inner routine returning a QuadResult.

    The reported error is the outer estimate plus the integral of the inner
    error estimates over the outer nodes (piecewise power-law interpolation
    on the sorted nodes). The outer rule runs at half the tolerance; inner routines should
    run tighter still. Inner calls that did not converge are allowed as long
    as the total stays within tolerance.
    """
    record: dict[float, float] = {}
    count = [0]

    def outer_fn(w):
        out = np.empty(np.size(w))
        for i, wi in enumerate(np.ravel(w)):
            res = inner(float(wi))
            out[i] = res.value
            record[float(wi)] = res.err_est
            count[0] += res.n_evals
        return out.reshape(np.shape(w))

    # half of the budget for the outer rule, the rest for the inner errors
    res = integrate(outer_fn, a, b, cfg.tightened(2.0), edges=edges, decay=decay,
                    breaks=breaks, break_edge=break_edge, raise_on_fail=False)
    inner_err = 0.0
    if record:
        ws = sorted(record)
        es = [record[w] for w in ws]
        inner_err = math.fsum(_error_between(ws[i], ws[i + 1], es[i], es[i + 1])
                              for i in range(len(ws) - 1))
        if math.isfinite(a):
            lead = es[0] * (ws[0] - a)
            if a == 0.0 and len(ws) > 1:
                gamma = _error_exponent(ws[0], ws[1], es[0], es[1])
                if gamma is not None and -1.0 < gamma < 0.0:
                    lead = es[0] * ws[0] / (gamma + 1.0)
            inner_err += lead
        if math.isfinite(b):
            inner_err += es[-1] * (b - ws[-1])
    err = res.err_est + inner_err
    ok = res.converged and err <= max(cfg.abs_tol, cfg.rel_tol * abs(res.value))
    total = QuadResult(res.value, err, res.n_evals + count[0], ok)
    if raise_on_fail and not ok:
        raise NonConvergence(
            f"iterated quadrature did not converge (err_est={err:.3e})", total)
    return total


def line_drop(u: Profile, x, e) -> Callable:
    """z -> u(x) - u(x + z e) along a line, with the radial fast path that
    keeps relative accuracy when z is tiny. ``e`` must be a unit vector."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = np.atleast_1d(np.asarray(e, dtype=float))
    if u.radial:
        r0 = float(np.linalg.norm(x))
        xe = float(np.dot(x, e))

        def drop(z):
            z = np.asarray(z, dtype=float)
            return u.radial_drop(r0, z * (2.0 * xe + z))
    else:
        u0 = float(u.value(x))

        def drop(z):
            z = np.asarray(z, dtype=float)
            return u0 - u.value(x + z[..., None] * e)
    return drop


def _ratio(fn, y):
    """fn(y) / y with the limit 1 at y = 0 (for log1p, expm1 and sinh)."""
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(y == 0.0, 1.0, fn(y) / np.where(y == 0.0, 1.0, y))


def line_pair(u: Profile, x, e) -> Optional[Callable]:
    """Scale-free pieces of the paired differences for the bump family.

    With dp = u(x) - u(x + z e) and dm = u(x) - u(x - z e), returns
    z -> (dp / z, -dm / z, (dp + dm) / z^2). All three stay O(1) as z -> 0
    and are formed without cancellation, so the paired kernel integrand can
    be evaluated at nodes where z^2 or z^(1+sp) would underflow. Returns
    None for other profiles or points outside the support.
    """
    if u.kind not in (BUMP, SCALED_BUMP):
        return None
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = np.atleast_1d(np.asarray(e, dtype=float))
    radius = 1.0 if u.kind == BUMP else u.rho
    r0 = float(np.linalg.norm(x))
    q0 = (radius - r0) * (radius + r0)
    if not q0 > 0.0:
        return None
    xe = float(np.dot(x, e))
    u0 = float(u.radial_value(r0))
    s = u.s_exp

    def pieces(z):
        z = np.asarray(z, dtype=float)
        a_p = (2.0 * xe + z) / q0          # u(x + z e) = u0 (1 - z a_p)^s
        a_m = (z - 2.0 * xe) / q0
        c_p = s * a_p * _ratio(np.log1p, -z * a_p)
        c_m = s * a_m * _ratio(np.log1p, -z * a_m)
        big_a = u0 * c_p * _ratio(np.expm1, -z * c_p)
        big_b = -u0 * c_m * _ratio(np.expm1, -z * c_m)
        omega = a_p * a_m - 2.0 / q0        # (1 - z a_p)(1 - z a_m) = 1 + z^2 omega
        mu = 0.5 * s * omega * _ratio(np.log1p, z * z * omega)
        half_d = -0.25 * (c_p - c_m)        # d / (2 z)
        d = 2.0 * z * half_d
        sh = half_d * _ratio(np.sinh, 0.5 * d)
        s2 = -2.0 * u0 * (mu * _ratio(np.expm1, z * z * mu) * np.cosh(d) + 2.0 * sh * sh)
        return big_a, big_b, s2

    return pieces


def radial_pair_sum(u: Profile, r0: float) -> Optional[Callable]:
    """Accurate (u0 - u(r_+)) + (u0 - u(r_-)) for the bump family, where
    r_+^2 = r0^2 + dsq_plus and r_-^2 = r0^2 + dsq_minus.

    The two drops have opposite signs when the points sit on either side of
    the sphere |y| = r0, and their plain sum cancels. The caller supplies
    ``dsq_sum = dsq_plus + dsq_minus`` in a cancellation-free form and the
    plain sum ``fallback``, which is kept where a point leaves the support.
    Returns None for other profiles or points outside the support.
    """
    if u.kind not in (BUMP, SCALED_BUMP):
        return None
    radius = 1.0 if u.kind == BUMP else u.rho
    q0 = (radius - r0) * (radius + r0)
    if not q0 > 0.0:
        return None
    u0 = float(u.radial_value(r0))
    s = u.s_exp

    def pair_sum(dsq_plus, dsq_minus, dsq_sum, fallback):
        a, b, total, out = np.broadcast_arrays(
            *(np.asarray(t, dtype=float) for t in (dsq_plus, dsq_minus, dsq_sum, fallback)))
        out = out.copy()
        inside = (a < q0) & (b < q0)
        a = -a[inside] / q0
        b = -b[inside] / q0
        w = -total[inside] / q0 + a * b
        out[inside] = u0 * bracket_gap(s, a, b, w)
        return out

    return pair_sum


def pv_paired_integrand(u: Profile, x, direction, params: Params) -> Callable:
    """h(z) = G(u(x) - u(x + z e)) + G(u(x) - u(x - z e)).

    Dividing by z^(1+sp) leaves an integrand of order z^(p-sp-1) at 0: the
    odd first-order parts of the two differences cancel.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    e = np.atleast_1d(np.asarray(direction, dtype=float))
    if x.shape != e.shape:
        raise DomainError("point and direction must have the same dimension")
    norm = np.linalg.norm(e)
    if not norm > 0:
        raise DomainError("direction must be nonzero")
    drop = line_drop(u, x, e / norm)
    p = params.p

    def h(z):
        z = np.asarray(z, dtype=float)
        return g_power(drop(z), p) + g_power(drop(-z), p)

    return h
