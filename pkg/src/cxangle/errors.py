"""Exception hierarchy shared by all modules."""


class CxAngleError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CxAngleError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(CxAngleError, OverflowError):
    """An intermediate result is not representable as a finite float."""


class DimensionError(CxAngleError, ValueError):
    """Vector length does not match the dimension of the space."""


class DegenerateError(CxAngleError, ValueError):
    """Inputs are degenerate for the operation (zero, dependent, antipodal)."""


class RankError(DegenerateError):
    """Gram-Schmidt met a vector in the span of its predecessors."""

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class ConvergenceError(CxAngleError, RuntimeError):
    """Iterative solver hit its iteration limit; best bounds are attached."""

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
