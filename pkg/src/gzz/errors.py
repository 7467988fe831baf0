"""Exception types raised across the package."""


class GZZError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(GZZError, ValueError):
    pass


class SupportViolation(GZZError, ValueError):
    """Target coupling is nonzero on a pair where the hardware coupling vanishes."""

    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(
            f"target coupling nonzero at pair ({i + 1}, {j + 1}) where J is zero"
        )


class NotACutVector(GZZError, ValueError):
    pass


class NonpositiveK(GZZError, ValueError):
    pass


class NotPowerOfTwo(GZZError, ValueError):
    pass


class UnsupportedOrder(GZZError, ValueError):
    pass


class ReducedToPowerOfTwo(UserWarning):
    """Emitted when a requested Hadamard order is replaced by the next power of two."""


class BadMultiIndex(GZZError, ValueError):
    pass


class BadIndexSet(GZZError, ValueError):
    pass


class BadLevel(GZZError, ValueError):
    pass


class EmptyBlocks(GZZError, ValueError):
    pass


class OddN(GZZError, ValueError):
    pass


class TooLarge(GZZError, ValueError):
    pass


class LPError(GZZError):
    """Solver failure. ``solution`` holds the last iterate when one exists."""

    def __init__(self, message: str, solution=None):
        super().__init__(message)
        self.solution = solution


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


class NumericalFailure(LPError, ArithmeticError):
    pass


class ConjectureViolation(GZZError):
    """A scanned instance exceeded the conjectured linear gate-time bound."""

    def __init__(self, matrix, value: float, bound: float):
        self.matrix = matrix
        self.value = value
        self.bound = bound
        super().__init__(
            f"optimal time {value!r} exceeds conjectured bound {bound!r}"
        )
