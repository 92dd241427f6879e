"""Exception types shared across the package."""


class HalfspaceError(Exception):
    """Base class for all package errors."""


class DomainError(HalfspaceError, ValueError):
    """An argument lies outside the domain of the requested function."""


class PreconditionError(HalfspaceError, ValueError):
    """Inputs violate a stated precondition (empty grid, bad dimension, ...)."""


class ConvergenceError(HalfspaceError, ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The partial value and achieved error estimate are kept on the exception
    so callers can decide whether the result is still usable.
    """

    def __init__(self, message, value=float("nan"), error=float("inf")):
        super().__init__(message)
        self.value = value
        self.error = error


class InversionError(HalfspaceError, ArithmeticError):
    """Numerical Laplace inversion failed its self-consistency test."""

    def __init__(self, message, residual=float("inf")):
        super().__init__(message)
        self.residual = residual


class SimulationError(HalfspaceError, RuntimeError):
    """A Monte Carlo run produced no usable output."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ConfigError(HalfspaceError, ValueError):
    """Configuration document is malformed or names an unknown key."""
