"""Cancellation-free differences of the power brackets near k = 0.

Both the identity integrand and the paired near-field term of the
decomposition contain G(A) - G(B) with A = 1 - (1+u)^s, B = (1+v)^s - 1
and u ~ -k, v ~ k. A and B agree to first order in k, so the plain
difference loses all relative accuracy as k -> 0 while the kernel
k^(-1-sp) amplifies the error.
"""

from __future__ import annotations

import numpy as np

from .model import g_power


def bracket_gap(s, u, v, w):
    """A - B = 2 - (1+u)^s - (1+v)^s, given w = (1+u)(1+v) - 1 computed
    accurately by the caller."""
    with np.errstate(divide="ignore", invalid="ignore"):
        a = s * np.log1p(u)
        b = s * np.log1p(v)
        m = 0.5 * s * np.log1p(w)
        d = 0.5 * (a - b)
        return -2.0 * (np.expm1(m) * np.cosh(d) + 2.0 * np.sinh(0.5 * d) ** 2)


def g_gap(A, B, gap, p):
    """G(A) - G(B) given an accurate ``gap = A - B``."""
    A, B, gap = np.broadcast_arrays(*(np.asarray(t, dtype=float) for t in (A, B, gap)))
    if p == 2:
        return gap.copy()
    out = g_power(A, p) - g_power(B, p)
    # for A, B < 0 use G(A) - G(B) = G(-B) - G(-A), whose gap is the same
    base = np.where(A < 0, -A, B)
    ok = ((A > 0) & (B > 0)) | ((A < 0) & (B < 0))
    if np.any(ok):
        with np.errstate(divide="ignore", invalid="ignore"):
            fine = base[ok] ** (p - 1.0) * np.expm1((p - 1.0) * np.log1p(gap[ok] / base[ok]))
        out = np.where(ok, 0.0, out)
        out[ok] = fine
    return out
