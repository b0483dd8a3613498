"""Exception hierarchy shared by every module of the package."""


class BicircleError(Exception):
    """Base class for all errors raised by :mod:`bicircle`."""


class NotPositiveDefinite(BicircleError):
    """A Cholesky pivot fell below the degeneracy threshold."""


class NotHermitian(BicircleError):
    pass


class SingularDiagonal(BicircleError):
    pass


class IndexOutOfRange(BicircleError):
    pass


class DegreeZeroLeading(BicircleError):
    """The coefficient of z^n w^m of a degree-(n, m) polynomial vanishes."""


class UnstableDensity(BicircleError):
    pass


class GridTooCoarse(BicircleError):
    pass


class MissingLevel(BicircleError):
    pass


class InvariantViolation(BicircleError):
    pass


class ConstraintViolation(BicircleError):
    pass


class SingularLeadingCoefficient(BicircleError):
    pass


class BaseNotBS(BicircleError):
    """Base data of an extension does not satisfy the Bernstein-Szego pattern."""


class DivisionResidual(BicircleError):
    """An exact polynomial division left a constant term above tolerance."""


class InvalidInput(BicircleError):
    """A file or argument could not be parsed into a valid object."""
