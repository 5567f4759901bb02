"""Exception types shared across the package."""


class MincompError(Exception):
    """Base class for all package errors."""


class EmptyTestSetError(MincompError):
    """Raised when an operation needs at least one test position but the mask is all ones."""


class LengthMismatchError(MincompError):
    """Raised when string/mask/prediction lengths disagree."""


class InvalidThetaError(MincompError):
    """Raised when a Bernoulli bias is outside the open interval (0, 1)."""


class OutOfRangeError(MincompError):
    """Raised when an integer argument falls outside its allowed range."""


class InvalidBudgetError(MincompError):
    """Raised when an enumeration budget is malformed (length not a multiple of the opcode width, or step budget < 1)."""


class NoProgramFoundError(MincompError):
    """Raised when the enumerator found no program for a string within budget, so the code length is undefined."""


class ExhaustiveTooLargeError(MincompError):
    """Raised when exhaustive search would enumerate more completions than the configured limit allows."""


class TooLargeError(MincompError):
    """Raised when a full function-space enumeration would exceed the hard guard."""


class EmptySubsetError(MincompError):
    """Raised when a function subset holds no prior mass."""


class DegenerateDenominatorError(MincompError):
    """Raised when a loss-bound denominator is zero or negative."""


class DomainError(MincompError):
    """Raised when a real-valued argument is outside the function's domain."""
