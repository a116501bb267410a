"""Position and momentum Shannon entropies of the power-law packet.

Two independent routes are provided for each entropy:

* closed form: ``s_x_closed`` (log-gamma and digamma only) and
  ``s_p_semi_closed``, which still needs the auxiliary integral
  ``i_alpha`` because it has no closed form;
* direct quadrature of -int rho ln rho over the log-densities
  (``s_x_numeric``, ``s_p_numeric``).

Their sum is bounded below by 1 + ln(pi).
"""

from dataclasses import dataclass
import enum
import math

from .errors import BoundViolation, ConvergenceFailure
from .packet import PowerLawPacket, density_p_ln, density_x_ln
from .quadrature import (
    IntegrationResult,
    QuadratureConfig,
    integrate_half_line,
    integrate_real_line,
)
from .specfun import bessel_k_ln, digamma, ln_gamma

__all__ = [
    "ENTROPY_BOUND",
    "BOUND_SLACK",
    "Method",
    "EntropyReport",
    "s_x_closed",
    "s_x_numeric",
    "i_alpha",
    "s_p_semi_closed",
    "s_p_numeric",
    "u_total_direct",
    "total_uncertainty",
]

ENTROPY_BOUND = 1.0 + math.log(math.pi)
BOUND_SLACK = 1e-7
NEAR_EDGE_RELAXATION = 100.0
DIRECT_ASSEMBLY_TOL = 1e-10

# below this log-density the contribution rho ln rho is under 1e-300; 0 ln 0 := 0
_LN_UNDERFLOW = -745.0
_LN2 = math.log(2.0)
_LN_PI = math.log(math.pi)


class Method(enum.Enum):
    CLOSED_FORM = "closed"
    NUMERIC_ORACLE = "numeric"


@dataclass(frozen=True)
class EntropyReport:
    alpha: float
    s_x: float
    s_p: float
    u_total: float
    bound: float
    gap: float
    method_s_x: Method
    method_s_p: Method
    near_edge: bool = False

    def as_row(self) -> dict:
        return {
            "alpha": self.alpha,
            "s_x": self.s_x,
            "s_p": self.s_p,
            "u_total": self.u_total,
            "gap": self.gap,
        }


def _effective_cfg(packet: PowerLawPacket, cfg: QuadratureConfig) -> QuadratureConfig:
    return cfg.scaled(NEAR_EDGE_RELAXATION) if packet.near_edge else cfg


def _require(result: IntegrationResult, what: str) -> float:
    if not result.converged:
        raise ConvergenceFailure(
            f"{what}: quadrature did not converge "
            f"(value {result.value!r}, error estimate {result.error_estimate!r})"
        )
    return result.value


def _neg_rho_ln_rho(ln_rho: float) -> float:
    if ln_rho < _LN_UNDERFLOW:
        return 0.0
    return -math.exp(ln_rho) * ln_rho


def s_x_closed(packet: PowerLawPacket) -> float:
    """S_x = ln(sqrt(pi) Gamma(a - 1/2) / Gamma(a)) + a (psi(a) - psi(a - 1/2))."""
    a = packet.alpha
    return (
        0.5 * _LN_PI
        + ln_gamma(a - 0.5)
        - ln_gamma(a)
        + a * (digamma(a) - digamma(a - 0.5))
    )


def s_x_numeric(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """S_x from -int rho ln rho dx over the real line."""
    result = integrate_real_line(
        lambda x: _neg_rho_ln_rho(density_x_ln(packet, x)),
        _effective_cfg(packet, cfg),
        even=True,
    )
    return _require(result, f"s_x_numeric(alpha={packet.alpha})")


def _ln_g(packet: PowerLawPacket, p: float) -> float:
    return (packet.alpha - 1.0) * math.log(p) + 2.0 * bessel_k_ln(packet.bessel_order, p)


def i_alpha(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """I(alpha) = int_0^inf g ln g dp with g = p^(alpha-1) K_((alpha-1)/2)(p)^2.

    ln g is assembled from ``bessel_k_ln`` so it stays exact where g itself
    would underflow; the p -> 0 behaviour (log singular at alpha = 1,
    algebraic for alpha < 1) is handled by the half-line quadrature.
    """

    def integrand(p):
        ln_g = _ln_g(packet, p)
        if ln_g < _LN_UNDERFLOW:
            return 0.0
        return math.exp(ln_g) * ln_g

    result = integrate_half_line(integrand, _effective_cfg(packet, cfg))
    return _require(result, f"i_alpha(alpha={packet.alpha})")


def _ln_sp_scale(a: float) -> float:
    """ln[2^(a-2) sqrt(pi) Gamma(a/2)^2 Gamma(a-1/2) / Gamma(a)]."""
    return (a - 2.0) * _LN2 + 0.5 * _LN_PI + 2.0 * ln_gamma(0.5 * a) + ln_gamma(a - 0.5) - ln_gamma(a)


def _i_alpha_coefficient(a: float) -> float:
    """2^(3-a) / sqrt(pi) * Gamma(a) / (Gamma(a/2)^2 Gamma(a-1/2))."""
    return math.exp(
        (3.0 - a) * _LN2 - 0.5 * _LN_PI + ln_gamma(a) - 2.0 * ln_gamma(0.5 * a) - ln_gamma(a - 0.5)
    )


def s_p_semi_closed(
    packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig(), i_value: float = None
) -> float:
    """S_p from the gamma-function prefactors and I(alpha).

    Pass ``i_value`` to reuse an already computed I(alpha).
    """
    a = packet.alpha
    if i_value is None:
        i_value = i_alpha(packet, cfg)
    return _ln_sp_scale(a) - _i_alpha_coefficient(a) * i_value


def s_p_numeric(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """S_p from -2 int_0^inf rho ln rho dp (rho is even in p)."""
    result = integrate_half_line(
        lambda p: _neg_rho_ln_rho(density_p_ln(packet, p)),
        _effective_cfg(packet, cfg).scaled(0.5),
    )
    return 2.0 * _require(result, f"s_p_numeric(alpha={packet.alpha})")


def u_total_direct(packet: PowerLawPacket, i_value: float) -> float:
    """U assembled in one expression rather than as S_x + S_p.

    ln pi + (a-2) ln 2 - 2 ln[Gamma(a) / (Gamma(a/2) Gamma(a-1/2))]
      + a (psi(a) - psi(a-1/2)) - coefficient * I(a)
    """
    a = packet.alpha
    return (
        _LN_PI
        + (a - 2.0) * _LN2
        - 2.0 * (ln_gamma(a) - ln_gamma(0.5 * a) - ln_gamma(a - 0.5))
        + a * (digamma(a) - digamma(a - 0.5))
        - _i_alpha_coefficient(a) * i_value
    )


def total_uncertainty(
    packet: PowerLawPacket,
    cfg: QuadratureConfig = QuadratureConfig(),
    method: Method = Method.CLOSED_FORM,
) -> EntropyReport:
    """S_x, S_p, their sum and its distance above 1 + ln(pi).

    With the default closed-form method the direct one-expression assembly
    of U is evaluated too and must agree with S_x + S_p to 1e-10.
    Raises BoundViolation if the sum falls below the bound by more than
    BOUND_SLACK.
    """
    if method is Method.CLOSED_FORM:
        i_value = i_alpha(packet, cfg)
        s_x = s_x_closed(packet)
        s_p = s_p_semi_closed(packet, cfg, i_value=i_value)
        direct = u_total_direct(packet, i_value)
        if abs(direct - (s_x + s_p)) > DIRECT_ASSEMBLY_TOL * max(1.0, abs(direct)):
            raise ArithmeticError(
                f"direct assembly of U disagrees with S_x + S_p at alpha={packet.alpha}: "
                f"{direct!r} vs {s_x + s_p!r}"
            )
    else:
        s_x = s_x_numeric(packet, cfg)
        s_p = s_p_numeric(packet, cfg)
    u_total = s_x + s_p
    gap = u_total - ENTROPY_BOUND
    if gap < -BOUND_SLACK:
        raise BoundViolation(
            f"U = {u_total!r} lies {-gap:.3g} below 1 + ln(pi) at alpha={packet.alpha}"
        )
    return EntropyReport(
        alpha=packet.alpha,
        s_x=s_x,
        s_p=s_p,
        u_total=u_total,
        bound=ENTROPY_BOUND,
        gap=gap,
        method_s_x=method,
        method_s_p=method,
        near_edge=packet.near_edge,
    )
