"""Exception types raised across the package."""


class GeneoError(Exception):
    """Base class for all errors raised by :mod:`geneo`."""


class GroupTooLarge(GeneoError):
    pass


class InconsistentHomomorphism(GeneoError):
    pass


class DomainTooLarge(GeneoError):
    pass


class NotStochastic(GeneoError):
    pass


class UnequalRowSums(GeneoError):
    pass


class NotEquivariant(GeneoError):
    pass


class NotTransitive(GeneoError):
    pass


class NotPermutant(GeneoError):
    pass


class NotPrime(GeneoError):
    pass


class InvarianceViolation(GeneoError):
    pass


class WrongSetting(GeneoError):
    pass


class ShapeMismatch(GeneoError, ValueError):
    pass


class ConsistencyError(GeneoError):
    """Two independent routes to the same quantity disagree."""
