"""Exception types shared across the package."""


class LcritError(Exception):
    """Base class for all package errors."""


class DomainError(LcritError):
    """An argument is outside the mathematical domain of an operation
    (bad parity, unsupported weight, non-critical point, ...)."""


class ParseError(LcritError):
    """An input file failed to parse.  Carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class InputDataError(LcritError):
    """Input data is structurally valid but unusable (wrong header,
    missing primes, mismatched case parameters, ...)."""


class PrecisionError(LcritError):
    """A computation could not reach the requested precision even after
    an automatic retry at doubled working precision."""


class ConsistencyError(LcritError):
    """An internal exactness check failed (e.g. a tensor-product
    coefficient came out non-integral), signalling bad input data."""
