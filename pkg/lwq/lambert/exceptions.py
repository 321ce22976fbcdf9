"""
Error hierarchy for the Lambert W solvers.

Domain errors and convergence failures are distinct types so the CLI can
map them onto its exit codes without inspecting messages.
"""


class LambertError(Exception):
    """Base class for every error raised by the lambert app."""


class DomainError(LambertError, ValueError):
    """The argument lies outside the real domain of the requested branch or reduction."""


class ConvergenceError(LambertError, RuntimeError):
    """Every seed in the schedule failed to produce an acceptable trace.

    The last attempted result is kept on ``result`` so callers that must not
    abort (sweeps, comparisons) can still report its status.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DegenerateCoefficients(LambertError, ArithmeticError):
    """A coefficient function hit a vanishing denominator."""
