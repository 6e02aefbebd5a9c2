"""Exception types shared across the package."""


class PSLabError(Exception):
    """Base class for all package errors."""


class PrecisionExhausted(PSLabError):
    """A certified decision could not be made at the maximum working precision.

    Raised when the quantity being compared sits closer to the decision
    boundary than the attainable error bound (e.g. a power n^c that is
    numerically indistinguishable from an integer).
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class RationalInput(PSLabError):
    """A decimal expansion terminated before enough convergents were certified."""


class ParameterRange(PSLabError):
    """A parameter lies outside the range an operation is defined for."""


class RangeTooLarge(PSLabError):
    """A requested enumeration range exceeds the supported bounds."""


class BudgetExceeded(PSLabError):
    """A direct summation would exceed the configured term budget."""

    def __init__(self, message, estimated_terms=None):
        super().__init__(message)
        self.estimated_terms = estimated_terms


class OutOfLemmaRange(PSLabError):
    """No closed-form bound covers the requested dyadic block."""


class ParseError(PSLabError):
    """A config file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ValidationError(PSLabError):
    """A parsed config violates a constraint; carries the constraint text."""

    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint or message
