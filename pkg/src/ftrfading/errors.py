"""Exception and warning types shared across the package."""


class FtrError(Exception):
    """Base class for numerical failures raised by this package.

    ``kernel`` names the routine that failed so callers (and the CLI) can
    report where a computation broke down.
    """

    def __init__(self, message, kernel=None):
        super().__init__(message)
        self.kernel = kernel


class DomainError(FtrError, ValueError):
    """An argument lies outside the domain of the function."""


class RangeError(FtrError, OverflowError):
    """The result is not representable as a double."""


class ConvergenceError(FtrError, ArithmeticError):
    """A series or iteration did not converge within its budget.

    The partially summed value and an estimate of the remaining error are
    attached so callers can decide whether the result is usable anyway.
    """

    def __init__(self, message, kernel=None, partial=None, bound=None):
        super().__init__(message, kernel)
        self.partial = partial
        self.bound = bound


class ConsistencyError(FtrError, RuntimeError):
    """An internal self-check failed (this indicates a bug, not bad input)."""


class TruncationWarning(UserWarning):
    """A mixture series was cut at its term budget before converging."""
