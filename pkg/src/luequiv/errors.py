"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`LUError`, so
callers (and the CLI) can separate user/data errors from bugs.
"""


class LUError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(LUError, ValueError):
    """Party dimensions or vector lengths disagree."""


class ZeroState(LUError, ValueError):
    """The zero vector does not define a ray."""


class PartyOutOfRange(LUError, IndexError):
    pass


class ShapeMismatch(LUError, ValueError):
    """An operator does not act on the state's Hilbert space."""


class NonUnitaryWitness(LUError, ValueError):
    pass


class NotGeneric(LUError, ValueError):
    """Phase matching was asked for but some block has size > 1."""


class ConfigInvalid(LUError, ValueError):
    pass


class NumericalError(LUError, ArithmeticError):
    """Base for failures of the floating point machinery."""


class EigensolverFailure(NumericalError):
    pass


class InconsistentRanks(NumericalError):
    """Two routes to the same dimension gave different integers."""


class StateFileError(LUError, ValueError):
    """A state/witness/report file could not be parsed."""
