"""Exception hierarchy.

Domain errors (a precondition about the mathematics failed) derive from
:class:`TropError`; shape and parse problems derive from :class:`DimensionError`
as well as :class:`ValueError`.  The CLI maps the two families to different
exit codes.
"""


class TropError(Exception):
    """Base class for domain errors."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class DivergenceError(TropError):
    """Kleene series diverges (maximum cycle mean is positive)."""


class NotIdempotent(TropError):
    def __init__(self, message="matrix is not idempotent", index=None):
        super().__init__(message)
        self.index = index


class NotFullRank(TropError):
    pass


class NotInHClass(TropError):
    pass


class DiagonalNotZero(TropError):
    pass


class DoesNotCommute(TropError):
    pass


class MatchFailed(NotInHClass):
    """No column of E is proportional to a given column of A."""


class NonUniformCycleMeans(TropError):
    pass


class EnumerationLimit(TropError):
    """Requested permutation enumeration exceeds the configured cap."""
