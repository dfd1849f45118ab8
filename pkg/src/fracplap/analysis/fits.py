"""Boundary behaviour of the bump's operator: singular-coefficient fits and
boundedness sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError
from ..model import Params, Profile
from ..quad import QuadConfig
from .common import SweepRow, raise_for_rows, sweep_rows

__all__ = ["SingularFit", "singular_fit", "fit_boundary_model", "bounded_sweep",
           "boundary_grid", "is_strictly_increasing"]


@dataclass(frozen=True)
class SingularFit:
    """Least-squares fit of v(x) ~ a + b (1 - x)^(-s) (+ optional corrections).

    ``extra`` holds the coefficients of any correction exponents, keyed by
    the exponent of (1 - x).
    """

    a: float
    b: float
    residual: float
    xs: tuple
    values: tuple = ()
    extra: dict = field(default_factory=dict)
    dropped: tuple = ()

    @property
    def max_abs_value(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values else float("nan")

    @property
    def relative_b(self) -> float:
        """|b| / max |v|: the size of the singular coefficient against the data."""
        return abs(self.b) / self.max_abs_value


def boundary_grid(j_min: int = 4, j_max: int = 14) -> list[float]:
    """x_j = 1 - 2^(-j), j = j_min..j_max."""
    if j_max < j_min:
        raise DomainError("j_max must be >= j_min")
    return [1.0 - 2.0 ** (-j) for j in range(j_min, j_max + 1)]


def fit_boundary_model(xs: Sequence[float], values: Sequence[float], s: float,
                       corrections: Sequence[float] = ()) -> SingularFit:
    """Fit ``values`` on the basis {1, (1-x)^(-s)} plus (1-x)^e for each e in
    ``corrections`` (e.g. ``[1 - s]``)."""
    xs = np.asarray(xs, dtype=float)
    v = np.asarray(values, dtype=float)
    ncol = 2 + len(corrections)
    if xs.size < max(3, ncol):
        raise DomainError(f"need at least {max(3, ncol)} samples, got {xs.size}")
    if np.any(np.diff(xs) <= 0) or np.any(xs >= 1.0):
        raise DomainError("abscissae must increase strictly toward 1")
    delta = 1.0 - xs
    cols = [np.ones_like(delta), delta ** (-s)] + [delta ** e for e in corrections]
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, v, rcond=None)
    residual = float(np.max(np.abs(A @ coef - v)))
    extra = {float(e): float(c) for e, c in zip(corrections, coef[2:])}
    return SingularFit(float(coef[0]), float(coef[1]), residual, tuple(xs.tolist()),
                       tuple(v.tolist()), extra)


def singular_fit(params: Params, cfg: Optional[QuadConfig] = None, j_max: int = 14, *,
                 j_min: int = 4, corrections: Sequence[float] = (),
                 jobs: int = 1) -> SingularFit:
    """Evaluate the bump's operator at x_j = 1 - 2^(-j) and fit the boundary model.

    In n = 1 the evaluator switches to the decomposition beyond x = 0.99;
    for n >= 2 the x_j are radii. Points that fail to converge are dropped
    (listed in ``dropped``) as long as enough remain for the fit.
    """
    cfg = cfg or QuadConfig()
    grid = boundary_grid(j_min, j_max)
    rows = sweep_rows(Profile.bump(params.s), grid, params, cfg, jobs)
    good = [r for r in rows if r.status == "ok"]
    dropped = tuple(r.x for r in rows if r.status != "ok")
    if len(good) < max(3, 2 + len(corrections)):
        raise_for_rows(rows)
    fit = fit_boundary_model([r.x for r in good], [r.value for r in good], params.s,
                             corrections)
    return SingularFit(fit.a, fit.b, fit.residual, fit.xs, fit.values, fit.extra, dropped)


def bounded_sweep(params: Params, cfg: Optional[QuadConfig] = None,
                  grid: Sequence[float] = (), *, jobs: int = 1,
                  profile: Optional[Profile] = None) -> tuple[float, list[SweepRow]]:
    """max |operator| of the bump over ``grid`` (a subset of [0, 1)) and the trace.

    Evaluation failures propagate; use :func:`~fracplap.analysis.common.sweep_rows`
    directly for a trace with per-row status instead.
    """
    cfg = cfg or QuadConfig()
    grid = [float(x) for x in grid]
    if any(not 0.0 <= x < 1.0 for x in grid):
        raise DomainError("sweep grid must lie in [0, 1)")
    u = profile or Profile.bump(params.s)
    rows = sweep_rows(u, grid, params, cfg, jobs)
    raise_for_rows(rows)
    max_abs = max((abs(r.value) for r in rows), default=0.0)
    return max_abs, rows


def is_strictly_increasing(values: Sequence[float]) -> bool:
    v = np.asarray(values, dtype=float)
    return bool(np.all(np.diff(v) > 0))
