"""Dimension-aware operator evaluation shared by the analysis tools."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError, NonConvergence
from ..model import Params, Profile
from ..oplap1d import EvalResult, evaluate_1d
from ..oplapnd import eval_outside_nd, eval_radial_nd
from ..parallel import ordered_map
from ..quad import QuadConfig

__all__ = ["operator_at", "SweepRow", "sweep_rows", "raise_for_rows"]


def _radius(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(abs(x)) if x.ndim == 0 else float(np.linalg.norm(x))


def operator_at(u: Profile, x, params: Params, cfg: Optional[QuadConfig] = None,
                method: str = "auto") -> EvalResult:
    """(-Delta)^s_p u at ``x``: a real number for n = 1, a point or a radius
    for n >= 2 (radial profiles only). Points outside the support are
    handled as well; points on its boundary are not."""
    cfg = cfg or QuadConfig()
    if params.n == 1:
        x = np.asarray(x, dtype=float)
        if x.size != 1:
            raise DomainError("a 1D evaluation point must be a scalar")
        return evaluate_1d(u, float(x.reshape(())), params, cfg, method)
    r = _radius(x)
    R = u.support_radius
    if r < R:
        return eval_radial_nd(u, r, params, cfg)
    if r > R:
        return eval_outside_nd(u, r, params, cfg)
    raise DomainError("x lies on the support boundary")


@dataclass(frozen=True)
class SweepRow:
    x: float
    value: float
    err_est: float
    n_evals: int
    status: str


def _row(job) -> SweepRow:
    u, x, params, cfg, method = job
    try:
        r = operator_at(u, x, params, cfg, method)
        return SweepRow(float(x), float(r.value), float(r.err_est), int(r.n_evals), "ok")
    except NonConvergence as exc:
        # the partial result belongs to one sub-integral, not to the operator
        n = 0 if exc.result is None else int(exc.result.n_evals)
        return SweepRow(float(x), math.nan, math.nan, n, "nonconvergence")
    except DomainError:
        return SweepRow(float(x), math.nan, math.nan, 0, "domain")


def sweep_rows(u: Profile, grid: Sequence[float], params: Params,
               cfg: Optional[QuadConfig] = None, jobs: int = 1,
               method: str = "auto") -> list[SweepRow]:
    """Evaluate on a grid of abscissae (radii when n >= 2), in grid order.

    Failures are recorded per row (``status``) instead of raised.
    """
    cfg = cfg or QuadConfig()
    return ordered_map(_row, [(u, float(x), params, cfg, method) for x in grid], jobs)


def raise_for_rows(rows: Sequence[SweepRow]) -> None:
    bad = [r for r in rows if r.status != "ok"]
    if bad:
        err = NonConvergence if bad[0].status == "nonconvergence" else DomainError
        raise err(f"evaluation failed at x = {bad[0].x!r} ({bad[0].status})")

