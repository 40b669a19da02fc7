"""Exception hierarchy shared by every module.

Each error carries a CLI exit code so the command-line front end can map
failures without a lookup table.
"""


class VeechmixError(Exception):
    exit_code = 70


class DataError(VeechmixError, ValueError):
    """Malformed or inconsistent input data."""

    exit_code = 65


class BasisMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class NonPositiveInput(DataError):
    pass


class AmbiguousComparison(VeechmixError, ArithmeticError):
    """A near-tie could not be resolved with exact coordinates."""


class UnrepresentableProduct(VeechmixError, ArithmeticError):
    """A product of two irrational field elements leaves the rational span."""


class OutOfDomain(DataError):
    pass


class InvalidPermutation(DataError):
    pass


class ReducibleInput(DataError):
    pass


class NonPositiveHeight(DataError):
    pass


class NonRationalAngle(DataError):
    pass


class UnsupportedUnfolding(DataError):
    """The Coxeter rotations need trigonometric values outside Q(sqrt d)."""


class InvalidSurface(DataError):
    pass


class NonIntegerGenus(InvalidSurface):
    pass


class OverlappingSlits(DataError):
    pass


class SlitOutsideSquare(DataError):
    pass


class BadParameters(DataError):
    pass


class BadConvergent(DataError):
    pass


class UnknownPreset(DataError):
    pass


class SingularOrbit(VeechmixError):
    """The trajectory ran into a cone point."""


class TimeBudgetExceeded(VeechmixError):
    pass


class NoReturn(VeechmixError):
    pass


class SingularSection(VeechmixError):
    pass
