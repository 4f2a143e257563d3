"""Exception hierarchy shared by every module of the package."""


class DiffseqError(Exception):
    """Base class for library errors."""


class ZeroStepError(DiffseqError, ValueError):
    """A difference step of zero was supplied."""


class OrderTooLargeError(DiffseqError, ValueError):
    """Requested difference order needs more samples than were given."""


class DomainError(DiffseqError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class StraddlesIntegerError(DiffseqError, ArithmeticError):
    """Interval contains an integer, so floor/fraction cannot be decided."""


class PrecisionExhausted(DiffseqError, ArithmeticError):
    """Refinement hit the precision cap without separating the operands."""

    def __init__(self, message, bits=None):
        super().__init__(message)
        self.bits = bits


class HypothesisViolation(DiffseqError, ValueError):
    """The premise of a conditional bound does not hold."""


class BudgetExceeded(DiffseqError, ValueError):
    """An exhaustive search would exceed the configured work budget."""


class SpecParseError(DiffseqError, ValueError):
    """Malformed polynomial/sequence/function specification."""
