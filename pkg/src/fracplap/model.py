"""Parameters, candidate profiles and the odd power map G(t) = |t|^(p-2) t."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

__all__ = [
    "Params",
    "Profile",
    "GValue",
    "g_power",
    "g_value",
    "g_ratio",
    "profile_value",
]


@dataclass(frozen=True)
class Params:
    """Dimension ``n``, order ``s``, exponent ``p`` and the normalization
    constant multiplying the integral (1 by default; the operator's constant
    is never fixed, so every reported value is "per unit constant")."""

    n: int
    s: float
    p: float
    c_norm: float = 1.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if not 0.0 < self.s < 1.0:
            raise DomainError(f"s must lie in (0, 1), got {self.s!r}")
        if not self.p >= 2.0:
            raise DomainError(f"p must be >= 2, got {self.p!r}")
        if not self.c_norm > 0.0:
            raise DomainError(f"c_norm must be positive, got {self.c_norm!r}")
        object.__setattr__(self, "n", int(self.n))
        assert self.sp < self.p

    @property
    def sp(self) -> float:
        return self.s * self.p

    def with_(self, **changes) -> "Params":
        return replace(self, **changes)


def g_power(t, p: float):
    """Return G(t) = |t|^(p-2) t. Works elementwise on arrays."""
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p!r}")
    if p == 2:
        return t * 1.0
    if isinstance(t, np.ndarray):
        return np.abs(t) ** (p - 2.0) * t
    return abs(t) ** (p - 2.0) * t


@dataclass(frozen=True)
class GValue:
    t: float
    p: float
    value: float


def g_value(t: float, p: float) -> GValue:
    return GValue(t=t, p=p, value=float(g_power(t, p)))


def g_ratio(t: float, s_arg: float, p: float) -> float:
    """(G(s_arg) - G(t)) / G(s_arg - t) for t < s_arg; bounded below by 2^(2-p).

    Accepts arrays of equal shape.
    """
    if not np.all(np.asarray(t) < np.asarray(s_arg)):
        raise DomainError(f"g_ratio needs t < s_arg, got t={t!r}, s_arg={s_arg!r}")
    return (g_power(s_arg, p) - g_power(t, p)) / g_power(s_arg - t, p)


BUMP = "bump"
SCALED_BUMP = "scaled_bump"
POWER_CUSP = "power_cusp"
CUSTOM = "custom"


@dataclass(frozen=True)
class Profile:
    """A candidate function u.

    Build instances with the classmethods :meth:`bump`, :meth:`scaled_bump`,
    :meth:`power_cusp` and :meth:`custom`. ``amplitude`` multiplies the
    value and is how scaled copies ``lambda * u`` are expressed.

    For custom radial profiles ``value_fn`` receives radii; for non-radial
    ones it receives points as an array of shape ``(..., n)``.
    """

    kind: str
    s_exp: Optional[float] = None
    rho: float = 1.0
    t_exp: Optional[float] = None
    value_fn: Optional[Callable] = field(default=None, compare=False)
    gradient_fn: Optional[Callable] = field(default=None, compare=False)
    support_radius: float = math.inf
    radial: bool = True
    amplitude: float = 1.0
    edge_exponent: Optional[float] = None

    @classmethod
    def bump(cls, s_exp: float, amplitude: float = 1.0) -> "Profile":
        """(1 - |x|^2)^s_+ ."""
        _check_exponent(s_exp)
        return cls(BUMP, s_exp=s_exp, support_radius=1.0, amplitude=amplitude,
                   edge_exponent=s_exp)

    @classmethod
    def scaled_bump(cls, s_exp: float, rho: float, amplitude: float = 1.0) -> "Profile":
        """psi(x / rho) = (rho^2 - |x|^2)^s_+ / rho^(2s)."""
        _check_exponent(s_exp)
        if not rho > 0:
            raise DomainError(f"rho must be positive, got {rho!r}")
        return cls(SCALED_BUMP, s_exp=s_exp, rho=float(rho), support_radius=float(rho),
                   amplitude=amplitude, edge_exponent=s_exp)

    @classmethod
    def power_cusp(cls, t_exp: float) -> "Profile":
        """|x|^(-t) on the upper half ball {|x| < 1, x_n > 0}, zero elsewhere.

        Not C^{1,1} at the origin; only used for the tail-space integral.
        """
        if not t_exp > 0:
            raise DomainError(f"t_exp must be positive, got {t_exp!r}")
        return cls(POWER_CUSP, t_exp=float(t_exp), support_radius=1.0, radial=False)

    @classmethod
    def custom(cls, value_fn: Callable, gradient_fn: Optional[Callable] = None, *,
               support_radius: float = math.inf, radial: bool = True,
               edge_exponent: Optional[float] = None, amplitude: float = 1.0) -> "Profile":
        if not support_radius > 0:
            raise DomainError("support_radius must be positive")
        return cls(CUSTOM, value_fn=value_fn, gradient_fn=gradient_fn,
                   support_radius=float(support_radius), radial=radial,
                   amplitude=amplitude, edge_exponent=edge_exponent)

    def scaled(self, factor: float) -> "Profile":
        """The profile ``factor * u``."""
        return replace(self, amplitude=self.amplitude * factor)

    def radial_value(self, r):
        """Value at radius ``r`` (array-friendly); radial profiles only."""
        if not self.radial:
            raise DomainError(f"{self.kind} profile is not radial")
        r = np.abs(np.asarray(r, dtype=float))
        if self.kind == BUMP:
            out = _bump(r, 1.0, self.s_exp)
        elif self.kind == SCALED_BUMP:
            out = _bump(r, self.rho, self.s_exp) / self.rho ** (2.0 * self.s_exp)
        else:
            out = np.asarray(self.value_fn(r), dtype=float)
            if out.shape != r.shape:
                out = np.broadcast_to(out, r.shape).astype(float)
        if self.amplitude != 1.0:
            out = self.amplitude * out
        return out

    def radial_drop(self, r0: float, dsq):
        """u(r0) - u(r) where r^2 = r0^2 + dsq, radial profiles only.

        For the bump family this avoids the cancellation in the plain
        difference when dsq is tiny, which the singular kernel amplifies.
        """
        dsq = np.asarray(dsq, dtype=float)
        u0 = self.radial_value(r0)
        if self.kind in (BUMP, SCALED_BUMP):
            radius = 1.0 if self.kind == BUMP else self.rho
            q0 = (radius - r0) * (radius + r0)
            if q0 > 0.0:
                w = np.maximum(-dsq / q0, -1.0)
                with np.errstate(divide="ignore"):
                    return -float(u0) * np.expm1(self.s_exp * np.log1p(w))
        r = np.sqrt(np.maximum(r0 * r0 + dsq, 0.0))
        return u0 - self.radial_value(r)

    def value(self, x):
        """Value at point(s) ``x``; scalars are treated as 1D points."""
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x[None]
        if self.kind == POWER_CUSP:
            r = np.sqrt(np.sum(x * x, axis=-1))
            inside = (r < 1.0) & (x[..., -1] > 0.0)
            with np.errstate(divide="ignore"):
                out = np.where(inside, np.where(inside, r, 1.0) ** (-self.t_exp), 0.0)
            return self.amplitude * out
        if self.kind == CUSTOM and not self.radial:
            out = np.asarray(self.value_fn(x), dtype=float)
            return self.amplitude * out
        return self.radial_value(np.sqrt(np.sum(x * x, axis=-1)))


def _check_exponent(s_exp):
    if s_exp is None or not 0.0 < s_exp < 1.0:
        raise DomainError(f"bump exponent must lie in (0, 1), got {s_exp!r}")


def _bump(r, radius, s_exp):
    # (R - r)(R + r) keeps relative accuracy of R^2 - r^2 near the edge
    base = (radius - r) * (radius + r)
    return np.where(base > 0.0, np.maximum(base, 0.0) ** s_exp, 0.0)


def profile_value(pr: Profile, x):
    """Evaluate ``pr`` at a point (or array of points)."""
    out = pr.value(x)
    return float(out) if np.ndim(out) == 0 else out
