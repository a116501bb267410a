"""Exception types shared across the package."""

import enum


class SpecFunErrorKind(enum.Enum):
    DOMAIN_ERROR = "DomainError"
    CONVERGENCE_FAILURE = "ConvergenceFailure"


class SpecFunError(Exception):
    """Base class for failures of the numerical kernels.

    ``kind`` tells callers whether the argument was outside the supported
    domain or an iteration cap was exhausted.
    """

    kind: SpecFunErrorKind

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class DomainError(SpecFunError, ValueError):
    kind = SpecFunErrorKind.DOMAIN_ERROR


class ConvergenceFailure(SpecFunError, RuntimeError):
    kind = SpecFunErrorKind.CONVERGENCE_FAILURE


class NonFiniteSample(ArithmeticError):
    """An integrand returned inf or nan at an interior quadrature node."""

    def __init__(self, x: float, fx: float):
        super().__init__(f"integrand returned {fx!r} at x={x!r}")
        self.x = x
        self.fx = fx


class SingularAtZero(DomainError):
    """The momentum amplitude diverges at p = 0 for alpha <= 1."""


class BoundViolation(ArithmeticError):
    """Computed total entropy fell below 1 + ln(pi) by more than the slack.

    This can only mean an implementation bug.
    """


class NearEdgeWarning(UserWarning):
    """Packet exponent is close to the normalizability edge alpha = 1/2."""
