"""Numerical evaluation of the fractional p-Laplacian of radial profiles."""

from .errors import (DivisionByNearZero, DomainError, EvaluationError, FracPLapError,
                     NonConvergence)
from .model import GValue, Params, Profile, g_power, g_ratio, g_value, profile_value
from .oplap1d import (EvalResult, eval_decomposed_1d, eval_direct_1d, eval_outside_1d,
                      evaluate_1d, symmetry_reduce)
from .oplapnd import (RadialReduction, eval_cartesian_2d, eval_outside_nd, eval_radial_nd,
                      kernel_moment, kernel_moment_beta, sphere_measure)
from .quad import (QuadConfig, QuadResult, integrate, integrate2d_iterated, iterated,
                   pv_paired_integrand)

__version__ = "0.1.0"

__all__ = [
    "DivisionByNearZero", "DomainError", "EvaluationError", "FracPLapError", "NonConvergence",
    "GValue", "Params", "Profile", "g_power", "g_ratio", "g_value", "profile_value",
    "EvalResult", "eval_decomposed_1d", "eval_direct_1d", "eval_outside_1d", "evaluate_1d",
    "symmetry_reduce",
    "RadialReduction", "eval_cartesian_2d", "eval_outside_nd", "eval_radial_nd",
    "kernel_moment", "kernel_moment_beta", "sphere_measure",
    "QuadConfig", "QuadResult", "integrate", "integrate2d_iterated", "iterated",
    "pv_paired_integrand",
]
