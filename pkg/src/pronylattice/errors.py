"""Exception types raised across the package."""


class PronyLatticeError(Exception):
    """Base class for all package errors."""


class PoleEvaluation(PronyLatticeError, ZeroDivisionError):
    """A meromorphic function was evaluated on (or within 1e-14 of) a pole."""


class NonConvergent(PronyLatticeError, ArithmeticError):
    """A quadrature could not certify its requested tolerance."""


class StripViolation(PronyLatticeError, ValueError):
    """Re s lies outside the strip where the Mellin integral converges."""


class CoincidentPole(PronyLatticeError, ValueError):
    """Two pole families share a location, so the pole is not simple."""


class IncommensurateInput(PronyLatticeError, ValueError):
    """A Diophantine question involves irrational data that cannot be decided exactly."""


class UnsupportedModel(PronyLatticeError, ValueError):
    """The requested operation has no closed form for this model."""


class InvalidSpec(PronyLatticeError, ValueError):
    """A model specification violates its parameter invariants."""


class NegativeDensity(PronyLatticeError, ValueError):
    """A relaxation density returned a negative value."""


class DegenerateLadder(PronyLatticeError, ValueError):
    """A ladder has zero total weight and cannot be normalized."""
