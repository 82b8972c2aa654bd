"""Exception hierarchy shared by all modules."""


class CohaError(Exception):
    """Base class for every error raised by cohadt."""


# arithmetic
class ZeroLeadingTerm(CohaError, ZeroDivisionError):
    pass


# quiver data
class DimensionMismatch(CohaError, ValueError):
    pass


class ZeroDimensionVector(CohaError, ValueError):
    pass


class AsymmetricQuiver(CohaError, ValueError):
    pass


# algebra
class ShapeMismatch(CohaError, ValueError):
    pass


class QuiverMismatch(CohaError, ValueError):
    pass


class NotSymmetric(CohaError, ValueError):
    pass


class NotHomogeneous(CohaError, ValueError):
    pass


class InternalNonPolynomial(CohaError, ArithmeticError):
    """The shuffle sum left a remainder. Always a bug: the sum is a polynomial."""


class NegativeDifference(CohaError, ArithmeticError):
    """A primitive dimension came out negative, contradicting freeness."""


# generating series
class NonIntegralCoefficient(CohaError, ArithmeticError):
    pass


class InsufficientPrecision(CohaError, ArithmeticError):
    pass


class NormalizationFailure(CohaError, ArithmeticError):
    pass


class IndexMapMismatch(CohaError, ArithmeticError):
    pass


# input parsing
class ParseError(CohaError, ValueError):
    """Malformed input text. ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class AsymmetricMatrix(ParseError):
    pass


class NegativeEntry(ParseError):
    pass


class UnknownVariable(ParseError):
    pass
