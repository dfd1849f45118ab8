"""Sampled Hoelder seminorm of a function."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..errors import DomainError

__all__ = ["holder_seminorm"]


def holder_seminorm(samples: Sequence, nu: float) -> float:
    """max over sample pairs of |u(x) - u(y)| / |x - y|^nu.

    ``samples`` is a sequence of ``(point, value)``; points may be scalars or
    vectors of a common dimension. Pairs of coincident points are skipped.
    """
    if not 0.0 < nu < 1.0:
        raise DomainError(f"nu must lie in (0, 1), got {nu!r}")
    if len(samples) < 2:
        raise DomainError("need at least two samples")
    pts = np.array([np.atleast_1d(np.asarray(x, dtype=float)) for x, _ in samples])
    vals = np.array([float(v) for _, v in samples])
    best = 0.0
    for i in range(len(vals) - 1):
        dist = np.sqrt(np.sum((pts[i + 1:] - pts[i]) ** 2, axis=-1))
        keep = dist > 0.0
        if np.any(keep):
            q = np.abs(vals[i + 1:][keep] - vals[i]) / dist[keep] ** nu
            best = max(best, float(np.max(q)))
    return best
