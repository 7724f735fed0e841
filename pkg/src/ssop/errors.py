"""Exception types raised across the package."""


class SsopError(Exception):
    """Base class for all package errors."""


class ParameterError(SsopError, ValueError):
    """An argument violates its documented contract."""


class DomainError(SsopError, ValueError):
    """Input outside the domain of a mathematical function (e.g. NaN)."""


class NumericalError(SsopError, ArithmeticError):
    """A quadrature or simulation produced a non-finite or out-of-range value."""


class UnsupportedRegimeError(SsopError):
    """Operation only defined for a subset of channel regimes."""
