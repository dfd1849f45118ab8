"""The scalar identity that removes the (1 - x)^(-s) term near the boundary.

With A(k) = [1 - (1 - k)^s]^(p-1) and B(k) = [(1 + k)^s - 1]^(p-1),

    1/(sp) + int_0^1 (A - B) k^(-1-sp) dk - int_1^inf B k^(-1-sp) dk = 0.

The integral part is also split at a small eps into H1 + H2 + H3, where
H1 and H2 vanish as eps -> 0 and H3 -> -1/(sp) in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .._brackets import bracket_gap, g_gap
from ..model import Params, g_power
from ..quad import QuadConfig, integrate

__all__ = ["IdentityReport", "identity_residual", "h_split", "DEFAULT_EPS"]

DEFAULT_EPS = (1e-1, 1e-2, 1e-3, 1e-4)


def _left_bracket(k, s):
    """1 - (1 - k)^s."""
    with np.errstate(divide="ignore"):
        return -np.expm1(s * np.log1p(-np.minimum(k, 1.0)))


def _right_bracket(k, s):
    """(1 + k)^s - 1."""
    return np.expm1(s * np.log1p(k))


def _paired(k, s, p, sp):
    A = _left_bracket(k, s)
    B = _right_bracket(k, s)
    gap = bracket_gap(s, -k, k, -k * k)
    return g_gap(A, B, gap, p) / k ** (1.0 + sp)


@dataclass(frozen=True)
class IdentityReport:
    s: float
    p: float
    residual: float
    err_est: float
    h1: tuple
    h2: tuple
    h3: tuple
    eps_sequence: tuple

    @property
    def h3_limit(self) -> float:
        return -1.0 / (self.s * self.p)


def h_split(s: float, p: float, eps: float, cfg: Optional[QuadConfig] = None):
    """(H1, H2, H3) at ``eps`` in (0, 1/2); their sum plus 1/(sp) is the residual."""
    cfg = cfg or QuadConfig()
    sp = s * p

    def paired(k):
        return _paired(k, s, p, sp)

    def right(k):
        return g_power(_right_bracket(k, s), p) / k ** (1.0 + sp)

    h1 = integrate(paired, 0.0, eps, cfg, edges=(p - 1.0 - sp, None)).value
    h2 = -integrate(right, eps, eps / (1.0 - eps), cfg).value
    h3 = -1.0 / sp + float(_left_bracket(eps, s)) ** p / (sp * eps ** sp)
    return h1, h2, h3


def identity_residual(s: float, p: float, cfg: Optional[QuadConfig] = None,
                      eps_sequence: Sequence[float] = DEFAULT_EPS) -> IdentityReport:
    """Evaluate the identity's left side and the H-split along ``eps_sequence``.

    The default configuration is tighter than the evaluators' (the residual
    is a difference of O(1) terms that should cancel exactly).
    """
    cfg = cfg or QuadConfig(abs_tol=1e-13, rel_tol=1e-12)
    params = Params(1, s, p)
    sp = params.sp

    def paired(k):
        return _paired(k, s, p, sp)

    def right(k):
        return g_power(_right_bracket(k, s), p) / k ** (1.0 + sp)

    near = integrate(paired, 0.0, 1.0, cfg, edges=(p - 1.0 - sp, s))
    # B(k) k^(-1-sp) ~ k^(-1-s) at infinity
    far = integrate(right, 1.0, math.inf, cfg, decay=1.0 + s)
    residual = math.fsum([1.0 / sp, near.value, -far.value])
    err = near.err_est + far.err_est + 4.0 * np.finfo(float).eps * (1.0 / sp + abs(near.value) + abs(far.value))
    h1, h2, h3 = [], [], []
    for e in eps_sequence:
        a, b, c = h_split(s, p, e, cfg)
        h1.append(a)
        h2.append(b)
        h3.append(c)
    return IdentityReport(s, p, residual, float(err), tuple(h1), tuple(h2), tuple(h3),
                          tuple(float(e) for e in eps_sequence))
