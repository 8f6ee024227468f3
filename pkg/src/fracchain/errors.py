"""Exception hierarchy shared by all modules.

The CLI maps :class:`ValidationError` subclasses to exit code 2 and
:class:`NumericRangeError` subclasses to exit code 3.
"""


class FracChainError(Exception):
    """Base class for all package errors."""


class ValidationError(FracChainError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a function."""


class UnsupportedInputError(ValidationError):
    """Input is well formed but violates a modelling hypothesis."""


class NumericRangeError(FracChainError, ArithmeticError):
    """Argument lies outside the supported numerical box."""


class SingularityError(NumericRangeError, ZeroDivisionError):
    """A series or matrix that must be inverted is singular."""


class AccuracyError(NumericRangeError):
    """Requested accuracy cannot be guaranteed for the given inputs."""


class DegenerateInputError(ValidationError, ZeroDivisionError):
    """A ratio has a zero denominator because the input is degenerate."""
