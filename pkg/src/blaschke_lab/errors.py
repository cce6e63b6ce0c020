"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class BlaschkeLabError(Exception):
    """Base class for all library errors."""


class DomainError(BlaschkeLabError, ValueError):
    """A point or parameter lies outside the domain of an operation."""


class MapSpecError(BlaschkeLabError, ValueError):
    """A map specification could not be parsed or violates an invariant.

    ``field`` is a dotted path into the offending JSON document, e.g.
    ``outer.zeros[1].re``.
    """

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class EvaluationOverflow(BlaschkeLabError, ArithmeticError):
    """A quantity is too large to be represented as a finite float."""


class OverflowNearSingularity(EvaluationOverflow):
    """Evaluation point is closer than the guard distance to a singular atom."""


class TauOverflow(EvaluationOverflow):
    """The distortion value overflows double precision."""


class ApertureTooNarrow(BlaschkeLabError, ValueError):
    pass


class InsufficientDepth(BlaschkeLabError, ValueError):
    pass


class AlphaExcluded(BlaschkeLabError, ValueError):
    pass


class StepTooLargeNearBoundary(BlaschkeLabError, ValueError):
    pass


class UnsupportedVariant(BlaschkeLabError, TypeError):
    pass


class FiniteDifferenceMismatch(BlaschkeLabError, ArithmeticError):
    """Real- and imaginary-direction difference quotients disagree."""
