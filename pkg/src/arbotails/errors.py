"""Exception hierarchy shared by all modules.

Domain errors (bad trees, inapplicable theorem) are separated from numerical
failures so the CLI can map them to distinct exit codes.
"""
from __future__ import annotations


class ArboTailsError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(ArboTailsError, ValueError):
    pass


class NotInvertible(ArboTailsError, ArithmeticError):
    pass


class InsufficientPrecision(ArboTailsError):
    pass


class DomainError(ArboTailsError):
    """Input is well formed but outside the hypotheses of the construction."""

    def __init__(self, message: str, vertices: tuple[int, ...] = ()):
        super().__init__(message)
        self.vertices = tuple(vertices)


class TreeSyntaxError(ArboTailsError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class AmbiguousZero(TreeSyntaxError):
    pass


class NotAlternating(DomainError):
    pass


class NotReduced(DomainError):
    pass


class DegenerateLink(DomainError):
    pass


class TheoremNotApplicable(DomainError):
    pass


class NumericalError(ArboTailsError):
    pass


class NoConvergence(NumericalError):
    pass


class FitError(NumericalError):
    pass
