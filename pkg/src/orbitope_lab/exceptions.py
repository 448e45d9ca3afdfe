"""Exception types raised by the orbitope lab."""


class OrbitopeError(Exception):
    """Base class for all library errors."""


class IdenticallyZero(OrbitopeError):
    """A trigonometric polynomial has (numerically) vanishing coefficients."""


class IllConditioned(OrbitopeError):
    """Root clusters could not be resolved at the requested tolerance."""


class DegeneratePattern(OrbitopeError):
    """The tangency system does not have a one-dimensional null space."""


class InvalidPattern(OrbitopeError, ValueError):
    """A tangency pattern violates its structural invariants."""


class DimensionMismatch(OrbitopeError, ValueError):
    pass


class DomainError(OrbitopeError, ValueError):
    pass


class CoincidentPoints(OrbitopeError, ValueError):
    pass


class BracketFailure(OrbitopeError):
    """No sign change was found where one is guaranteed."""


class SearchInconclusive(OrbitopeError):
    """The neighborliness search failed to certify the known-safe arc length."""
