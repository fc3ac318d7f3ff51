"""Exception hierarchy shared by every module."""


class QSelbergError(Exception):
    """Base class for all library errors."""


class FactorCapExceeded(QSelbergError):
    """An infinite product needed more factors than the context allows."""


class PoleHit(QSelbergError):
    """A denominator vanished (or came within the pole threshold)."""


class ZeroArgument(QSelbergError):
    """A multiplicative argument was zero where it must be nonzero."""


class NotConverged(QSelbergError):
    """A lattice sum did not reach its tolerance within the radius cap."""


class BalanceViolated(QSelbergError):
    """The balancing condition between exponents does not hold."""


class DimensionUnsupported(QSelbergError):
    """The requested dimension is outside the supported range."""


class PoleOnContour(QSelbergError):
    """An integrand pole lies on or too close to the unit torus."""


class TauIsPositiveInteger(QSelbergError):
    """The formula is undefined (or replaced by a limit) for integer tau."""


class IndexOutOfRange(QSelbergError):
    """An index argument is outside its admissible range."""


class ConstraintViolated(QSelbergError):
    """Parameters violate a convergence or admissibility constraint."""


class ConfigError(QSelbergError):
    """A run configuration could not be parsed."""
