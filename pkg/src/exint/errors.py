"""Exception hierarchy shared by every module."""


class ExintError(Exception):
    """Base class for all library errors."""


class PoleError(ExintError, ZeroDivisionError):
    """A spectral parameter hit a simple pole ``x = m/2``."""

    def __init__(self, m, x=None):
        self.m = m
        self.x = x
        msg = f"pole at m={m}" if x is None else f"pole at m={m} (x={x})"
        super().__init__(msg)


class DuplicateAbscissa(ExintError, ValueError):
    pass


class TruncationTooSmall(ExintError, ValueError):
    pass


class NotInvertible(ExintError, ZeroDivisionError):
    pass


class SingularW(NotInvertible):
    pass


class MismatchError(ExintError, AssertionError):
    """Two independent constructions of the same object disagree."""


class DenominatorZero(ExintError, ZeroDivisionError):
    def __init__(self, k, msg=None):
        self.k = k
        super().__init__(msg or f"vanishing denominator at k={k}")


class RankDeficient(ExintError, ArithmeticError):
    pass


class NoSolution(ExintError, ArithmeticError):
    pass


class DimensionMismatch(ExintError, ValueError):
    pass


class NullSpaceDimensionError(ExintError, ArithmeticError):
    pass


class SingularDispersion(ExintError, ZeroDivisionError):
    pass


class SingularCoefficient(ExintError, ZeroDivisionError):
    pass


class DegenerateLeadingCoefficient(ExintError, ArithmeticError):
    pass


class KernelEmpty(ExintError, ArithmeticError):
    pass


class DegeneratePair(ExintError, ValueError):
    pass


class ScalarParseError(ExintError, ValueError):
    pass
