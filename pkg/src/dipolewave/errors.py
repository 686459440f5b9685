"""Exception types raised by dipolewave."""


class DipoleWaveError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DipoleWaveError, ValueError):
    """Input lies outside the mathematical domain of an operation."""


class DataError(DipoleWaveError, ValueError):
    """Sampled input data is malformed (non-finite values, bad grid)."""


class TruncationError(DipoleWaveError, ValueError):
    """A pulse window cuts off too much of the envelope's norm.

    Attributes
    ----------
    missing_norm : float
        Fraction of the single-photon norm lying outside the window.
    """

    def __init__(self, message, missing_norm):
        super().__init__(message)
        self.missing_norm = missing_norm


class ConvergenceError(DipoleWaveError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""
