"""
Errors - Exception hierarchy shared by the numeric modules
"""


class PolyAsymError(Exception):
    """Base class for every error raised by polyasym."""


class ContractViolation(PolyAsymError, ValueError):
    """An argument is outside the domain an operation accepts."""


class ConfigurationError(PolyAsymError):
    """Precision, term budget or settings are insufficient or malformed."""


class QuadratureNonConvergence(PolyAsymError, ArithmeticError):
    """Tanh-sinh refinement hit the level cap.

    The best estimate reached so far is kept on ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class OracleNonConvergence(PolyAsymError, ArithmeticError):
    """Averaged partial sums did not settle within the requested tolerance."""

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = estimates


class InternalConsistencyError(PolyAsymError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""
