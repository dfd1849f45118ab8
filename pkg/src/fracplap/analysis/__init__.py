"""Verification tools built on the evaluators."""

from .barrier import (ComparisonReport, HopfReport, ball_kernel_mass, comparison_probe,
                      constructed_pairs, homogeneity_check, hopf_ratio, hopf_report,
                      scaling_check)
from .closed_form import CLOSED_FORM_P, closed_form_half, closed_form_limit, closed_form_range
from .common import SweepRow, operator_at, raise_for_rows, sweep_rows
from .fits import (SingularFit, boundary_grid, bounded_sweep, fit_boundary_model,
                   is_strictly_increasing, singular_fit)
from .holder import holder_seminorm
from .identity import DEFAULT_EPS, IdentityReport, h_split, identity_residual
from .lsp import LspTail, kernel_mass_closed_form, lsp_tail, lsp_window

__all__ = [
    "ComparisonReport", "HopfReport", "ball_kernel_mass", "comparison_probe",
    "constructed_pairs", "homogeneity_check", "hopf_ratio", "hopf_report", "scaling_check",
    "CLOSED_FORM_P", "closed_form_half", "closed_form_limit", "closed_form_range",
    "SweepRow", "operator_at", "raise_for_rows", "sweep_rows",
    "SingularFit", "boundary_grid", "bounded_sweep", "fit_boundary_model",
    "is_strictly_increasing", "singular_fit",
    "holder_seminorm",
    "DEFAULT_EPS", "IdentityReport", "h_split", "identity_residual",
    "LspTail", "kernel_mass_closed_form", "lsp_tail", "lsp_window",
]
