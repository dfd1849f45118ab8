"""Exception hierarchy shared by the evaluators and the CLI."""

from __future__ import annotations


class FracPLapError(Exception):
    """Base class for all package errors."""


class DomainError(FracPLapError, ValueError):
    """An argument lies outside the domain of an operation."""


class NonConvergence(FracPLapError, ArithmeticError):
    """Adaptive quadrature hit its subdivision limits above tolerance.

    ``result`` carries the best partial :class:`~fracplap.quad.QuadResult`
    when one is available.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class EvaluationError(FracPLapError, ArithmeticError):
    """An integrand returned NaN or infinity at an interior node."""


class DivisionByNearZero(FracPLapError, ArithmeticError):
    """A ratio was requested whose denominator is within its error bar of 0."""
