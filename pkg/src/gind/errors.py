"""Exception types raised across the package.

Class names double as the error names printed by the CLI.
"""


class GindError(Exception):
    """Base class for every error raised by :mod:`gind`."""


class DimensionMismatch(GindError, ValueError):
    pass


class SingularMatrix(GindError, ArithmeticError):
    def __init__(self, pivot_index, message=None):
        self.pivot_index = pivot_index
        super().__init__(message or f"pivot {pivot_index} is numerically zero")


class ConvergenceFailure(GindError, ArithmeticError):
    """Iteration cap reached; ``best_estimate`` holds the last iterate's value."""

    def __init__(self, best_estimate, message=None):
        self.best_estimate = best_estimate
        super().__init__(message or f"no convergence (best estimate {best_estimate!r})")


class ZeroVector(GindError, ValueError):
    pass


class ParseError(GindError, ValueError):
    def __init__(self, message, position=0):
        self.position = position
        super().__init__(f"{message} (at position {position})")


class InvalidExponent(GindError, ValueError):
    pass


class IndexOutOfRange(GindError, IndexError):
    pass


class DegenerateWitness(GindError, ArithmeticError):
    pass


class BudgetTooSmall(GindError, ValueError):
    pass
