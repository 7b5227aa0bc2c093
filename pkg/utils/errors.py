"""
Exception hierarchy shared by the services.
Each error carries the CLI exit code it maps to.
"""

from config import EXIT_MALFORMED, EXIT_UNSUPPORTED, EXIT_RESOURCE


class AlgebraError(ValueError):
    """Base class for every domain error raised by the services."""

    exit_code = EXIT_MALFORMED


class DimensionMismatchError(AlgebraError):
    pass


class SpaceMismatchError(AlgebraError):
    """Operands live over different quadratic spaces."""


class IsotropicVectorError(AlgebraError):
    """A reflection or inverse was requested for a vector with q(v) = 0."""


class SingularSpaceError(AlgebraError):
    pass


class NotAnIsometryError(AlgebraError):
    pass


class NotInvertibleError(AlgebraError):
    pass


class NotInGroupError(AlgebraError):
    """An element failed a group-membership precondition."""


class InvalidCartanMatrixError(AlgebraError):
    pass


class NotSymmetrizableError(AlgebraError):
    pass


class ReducibleMatrixError(AlgebraError):
    """Raised for reducible input; split it into components first."""


class InvalidTypeError(AlgebraError):
    """Unknown finite type or rank outside the allowed bounds."""


class UnsupportedSpaceError(AlgebraError):
    """Integral (order) checks requested outside the simply-laced setting."""

    exit_code = EXIT_UNSUPPORTED


class ResourceLimitError(AlgebraError):
    exit_code = EXIT_RESOURCE
