"""Exception hierarchy shared by the gensecant modules."""


class GenSecantError(Exception):
    """Base class for all errors raised by this package."""


class ExpressionError(GenSecantError):
    """Problem with a user-supplied expression.

    ``column`` is 1-based and points at the offending character, or is None
    when the error is not tied to a position.
    """

    def __init__(self, message, column=None):
        self.message = message
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class ExpressionSyntaxError(ExpressionError):
    pass


class UnknownIdentifier(ExpressionError):
    pass


class ArityMismatch(ExpressionError):
    pass


class DuplicateAbscissa(GenSecantError):
    """Two interpolation points coincide exactly."""

    def __init__(self, i, j, point):
        self.pair = (i, j)
        self.point = point
        super().__init__(f"points {i} and {j} coincide at {point!r}")


class TableTooSmall(GenSecantError):
    pass


class SingularDerivative(GenSecantError):
    pass


class NonFiniteValue(GenSecantError):
    pass


class SteffensenDenominatorZero(GenSecantError):
    pass


class ZeroFirstDerivative(GenSecantError):
    pass


class NonPositiveError(GenSecantError):
    pass


class ZeroErrorFactor(GenSecantError):
    pass


class ZeroRoot(GenSecantError):
    pass


class ZeroError(GenSecantError):
    pass
