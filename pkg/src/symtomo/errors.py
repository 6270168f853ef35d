"""Exception hierarchy shared by every module."""


class SymtomoError(Exception):
    """Base class for all package errors."""


class ArgumentError(SymtomoError, ValueError):
    """Malformed argument: wrong shape, negative order, empty input."""


class DomainError(SymtomoError, ValueError):
    """Mathematically invalid request, e.g. a divergent Gaussian integral."""


class DegenerateStateError(DomainError):
    """A superposition cancelled to (numerically) zero norm."""


class UnsupportedError(SymtomoError):
    """Valid request outside the implemented scope (e.g. N > 2 classification)."""


class ConvergenceError(SymtomoError):
    """Numerical procedure stopped before reaching its tolerance.

    The best available estimate is kept on ``estimate`` and its error on ``error``.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
