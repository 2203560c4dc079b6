"""Exception types raised by skewinfo."""


class SkewInfoError(Exception):
    """Base class for all library errors."""


class DomainError(SkewInfoError, ValueError):
    """An argument lies outside the domain of the function."""


class ParameterError(SkewInfoError, ValueError):
    """A metric parameter is outside its documented range."""


class RegularityError(SkewInfoError, ValueError):
    """The operation needs a regular metric (strictly positive metric constant)."""


class UnsupportedMetricError(SkewInfoError, KeyError):
    """No tabulated representation exists for this metric."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ContinuationError(SkewInfoError, ArithmeticError):
    """Complex continuation of a kernel failed or is unavailable."""


class PositivityError(SkewInfoError, ValueError):
    """A matrix failed a positivity or state-validity requirement."""


class QuadratureError(SkewInfoError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance.

    Attributes
    ----------
    value : float
        Best estimate obtained before giving up.
    error : float
        Achieved error estimate.
    """

    def __init__(self, message, value, error):
        super().__init__(message)
        self.value = value
        self.error = error
