"""Exception types shared across the package."""


class TeaTestError(Exception):
    """Base class for domain errors raised by this package."""


class DesignError(TeaTestError):
    """Invalid experiment design, or values from mismatched designs."""


class CombinatoricsOverflowError(TeaTestError):
    """A count does not fit in the unsigned 64-bit range."""


class EnumerationGuardError(TeaTestError):
    """Assignment space too large to enumerate exhaustively."""


class InfeasibleEntropyError(TeaTestError):
    """Requested entropy level lies outside the feasible range."""


class ConvergenceError(TeaTestError):
    """An iterative solver failed to converge."""
