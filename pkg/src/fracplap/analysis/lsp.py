"""Membership of the half-ball power cusp in the tail space L_{sp}.

For u = |x|^(-t) on {|x| < 1, x_n > 0} the tail integral

    int |1 + u|^(p-1) / (1 + |x|^(n+sp)) dx

splits into the kernel alone over all of R^n plus the excess
(1 + r^(-t))^(p-1) - 1 over the half-ball, which carries half of the
sphere measure. Near r = 0 the excess behaves like r^(n-1-t(p-1)), so the
integral is finite exactly when t < n/(p-1). Divergence is decided by that
exponent and never by quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import DomainError
from ..model import Params
from ..oplapnd import sphere_measure
from ..quad import QuadConfig, integrate

__all__ = ["LspTail", "lsp_tail", "lsp_window", "kernel_mass_closed_form"]


@dataclass(frozen=True)
class LspTail:
    value: float
    finite: bool
    err_est: float
    kernel_part: float
    t_exp: float


def sphere_area(n: int) -> float:
    """Measure of the unit sphere S^(n-1) in R^n (2 for n = 1)."""
    return sphere_measure(n - 1)


def kernel_mass_closed_form(params: Params) -> float:
    """int_0^inf r^(n-1) / (1 + r^(n+sp)) dr = pi / (m sin(n pi / m)), m = n + sp."""
    m = params.n + params.sp
    return math.pi / (m * math.sin(params.n * math.pi / m))


def lsp_window(params: Params) -> tuple[float, float]:
    """The cusp exponents (n/p, n/(p-1)) for which u lies in L_{sp} but the
    cusp is too strong for W^{s,p} type integrability."""
    return params.n / params.p, params.n / (params.p - 1.0)


def lsp_tail(t_exp: float, params: Params, cfg: Optional[QuadConfig] = None) -> LspTail:
    """Tail integral of the power cusp; ``value`` is inf when it diverges."""
    cfg = cfg or QuadConfig()
    if not t_exp > 0:
        raise DomainError(f"t_exp must be positive, got {t_exp!r}")
    n, p, sp = params.n, params.p, params.sp
    area = sphere_area(n)

    def kernel(r):
        return r ** (n - 1) / (1.0 + r ** (n + sp))

    kern = integrate(kernel, 0.0, math.inf, cfg, edges=(float(n - 1), None),
                     decay=1.0 + sp)
    kernel_part = area * kern.value
    beta = n - 1.0 - t_exp * (p - 1.0)
    if not beta > -1.0:
        return LspTail(math.inf, False, 0.0, kernel_part, t_exp)

    def excess(r):
        with np.errstate(divide="ignore", over="ignore"):
            inc = np.expm1((p - 1.0) * np.log1p(r ** (-t_exp)))
        return inc * kernel(r)

    cusp = integrate(excess, 0.0, 1.0, cfg, edges=(beta, None))
    value = kernel_part + 0.5 * area * cusp.value
    err = area * (kern.err_est + 0.5 * cusp.err_est)
    return LspTail(value, True, err, kernel_part, t_exp)
