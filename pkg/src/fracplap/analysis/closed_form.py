"""Closed-form operator values of the one-dimensional bump with s = 1/2.

For u = (1 - x^2)^(1/2)_+ and even p the operator has elementary closed
forms. They are strictly increasing on (0, 1) (constant for p = 2) and
serve as golden values for the evaluators.
"""

from __future__ import annotations

import math

from ..errors import DomainError

__all__ = ["closed_form_half", "closed_form_limit", "closed_form_range", "CLOSED_FORM_P"]

CLOSED_FORM_P = (2, 4, 6, 8)

_LIMITS = {2: math.pi, 4: 3.0 * math.pi, 6: 7.5 * math.pi, 8: 17.5 * math.pi}


def _check_p(p) -> int:
    if p not in CLOSED_FORM_P:
        raise DomainError(f"closed forms exist for p in {CLOSED_FORM_P}, got {p!r}")
    return int(p)


def closed_form_half(p: int, x: float, c_norm: float = 1.0) -> float:
    """Operator of (1 - x^2)^(1/2)_+ at x in (-1, 1) for s = 1/2, p in {2, 4, 6, 8}."""
    p = _check_p(p)
    if not abs(x) < 1.0:
        raise DomainError(f"|x| must be < 1, got {x!r}")
    x = float(x)
    q = (1.0 - x) * (1.0 + x)
    root = math.sqrt(q)
    if p == 2:
        v = math.pi
    elif p == 4:
        v = 3.0 * root * (math.log(4.0 * q) - 1.0) + 6.0 * x * math.asin(x)
    elif p == 6:
        v = (20.0 * root * (x * (math.log1p(-x) - math.log1p(x)) + 2.0)
             + 2.5 * math.pi * (8.0 * x * x - 5.0))
    else:
        v = (7.0 * root * (4.0 * (5.0 * x * x - 2.0) * math.log(4.0 * q) + (67.0 - x * x) / 6.0)
             + 35.0 * x * (8.0 * x * x - 7.0) * math.asin(x))
    return c_norm * v


def closed_form_limit(p: int, c_norm: float = 1.0) -> float:
    """Boundary limit x -> 1 of :func:`closed_form_half`."""
    return c_norm * _LIMITS[_check_p(p)]


def closed_form_range(p: int, c_norm: float = 1.0) -> tuple[float, float]:
    """Range [value at 0, boundary limit) of the closed form over (-1, 1)."""
    return closed_form_half(p, 0.0, c_norm), closed_form_limit(p, c_norm)
