"""Exception types raised across the package.

Every error carries a stable class name so reports and CLI output can
name the failure kind without parsing messages.
"""


class AgdmmError(Exception):
    """Base class for all package errors."""

    @property
    def kind(self):
        return type(self).__name__


# finite fields

class NotPrime(AgdmmError):
    """Characteristic is not a prime number."""


class ReducibleModulus(AgdmmError):
    """Supplied modulus polynomial is not monic-irreducible of the right degree."""


class DivisionByZero(AgdmmError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class FieldNotMatchingU(AgdmmError):
    """Field cardinality is not p**u for the requested trace tower height."""


# exact linear algebra

class DimensionMismatch(AgdmmError):
    """Operand shapes are incompatible."""


class FieldMismatch(AgdmmError):
    """Operands belong to different fields."""


class RankDeficient(AgdmmError):
    """Matrix rank is too small for the requested operation."""


class Inconsistent(AgdmmError):
    """Overdetermined system has no exact solution (corrupted data)."""


# curves and places

class DuplicateRoots(AgdmmError):
    """Numerator and denominator roots are not pairwise distinct."""


class GcdViolation(AgdmmError):
    """Extension degree shares a factor with the field characteristic."""


class UnsupportedDegreeGap(AgdmmError):
    """Numerator/denominator degree difference is not +1 or -1."""


class PlaceNotEvaluable(AgdmmError):
    """Requested evaluation at a place without finite coordinates."""


# coding schemes

class SchemeCurveMismatch(AgdmmError):
    """Scheme and curve kind are incompatible (or the curve fails the scheme's conditions)."""


class IndivisibleDimensions(AgdmmError):
    """Matrix dimensions are not divisible by the partition parameters."""


class TooFewPlaces(AgdmmError):
    """Fewer evaluation places than the recovery threshold."""


class InsufficientResponses(AgdmmError):
    """Fewer worker responses than the recovery threshold."""


# simulation and configuration

class ConfigInvalid(AgdmmError):
    """Configuration violates the schema or the scheme's preconditions."""


class DecodeFailed(AgdmmError):
    """A simulation run could not decode the product.

    The ``reason`` attribute holds the underlying exception.
    """

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason
