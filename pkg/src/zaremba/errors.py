"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: DomainError -> 2, ResourceError and
OverflowError -> 3.
"""


class DomainError(ValueError):
    """Input violates a mathematical precondition (bad fraction, non-prime modulus, ...)."""


class ResourceError(RuntimeError):
    """Request exceeds a configured budget (modulus too large, product set too big, ...)."""


class EnumerationOverflowError(OverflowError):
    """Orbit enumeration would overflow the checked 64-bit fast path.

    Raised up front, never after silent wraparound.
    """


class NumericalError(RuntimeError):
    """An iterative solver failed to converge within its budget."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SectorUnrealizableError(DomainError):
    """No semigroup element survives the sector filters at this scale."""
