"""Exception types shared across the package.

Everything derives from FracGMError so callers can catch the package's own
failures in one clause while still distinguishing bad parameters from bad
domains from numerical breakdown.
"""


class FracGMError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(FracGMError, ValueError):
    """A parameter is outside its admissible range (e.g. mu <= 0)."""


class DomainError(FracGMError, ValueError):
    """An evaluation point is outside the function's domain (e.g. t < 0)."""


class UnsupportedSpecError(FracGMError, ValueError):
    """The operation does not support this process specification."""


class ResolutionError(FracGMError, ValueError):
    """Sampled input is too coarse for the requested evaluation."""


class NumericError(FracGMError, ArithmeticError):
    """A numerical evaluation produced non-finite or meaningless values."""


class NotPSDError(NumericError):
    """A covariance matrix failed Cholesky even after the jitter ladder."""
