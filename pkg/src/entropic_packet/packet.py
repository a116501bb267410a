"""The power-law wave packet phi(x) = N / (1 + x^2)^(alpha/2).

Units have hbar = m = 1, so x and p are dimensionless. Densities are
exposed in log form (``density_x_ln``, ``density_p_ln``); the plain
amplitudes are derived from them.
"""

from dataclasses import dataclass, field
import math
from typing import Optional
import warnings

from .errors import DomainError, NearEdgeWarning, SingularAtZero
from .specfun import bessel_k_ln, ln_gamma

__all__ = [
    "PowerLawPacket",
    "MomentValue",
    "make_packet",
    "amplitude_x",
    "density_x_ln",
    "amplitude_p",
    "density_p_ln",
    "potential",
    "position_second_moment",
    "momentum_second_moment",
    "heisenberg_product",
]

NEAR_EDGE_ALPHA = 0.55
_LN2 = math.log(2.0)
_HALF_LN_PI = 0.5 * math.log(math.pi)


@dataclass(frozen=True)
class PowerLawPacket:
    """Normalized packet with exponent ``alpha`` > 1/2.

    ``norm_sq`` is N^2 = Gamma(alpha) / (sqrt(pi) Gamma(alpha - 1/2)).
    """

    alpha: float
    norm_sq: float = field(init=False, repr=False)
    ln_norm_sq: float = field(init=False, repr=False)

    def __post_init__(self):
        alpha = float(self.alpha)
        if not alpha > 0.5 or math.isinf(alpha):
            raise DomainError(f"alpha must exceed 1/2 for a normalizable packet, got {self.alpha!r}")
        ln_norm_sq = ln_gamma(alpha) - _HALF_LN_PI - ln_gamma(alpha - 0.5)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "ln_norm_sq", ln_norm_sq)
        object.__setattr__(self, "norm_sq", math.exp(ln_norm_sq))

    @property
    def near_edge(self) -> bool:
        """True when alpha < 0.55, where heavy tails make quadrature hard."""
        return self.alpha < NEAR_EDGE_ALPHA

    @property
    def bessel_order(self) -> float:
        return 0.5 * (self.alpha - 1.0)


@dataclass(frozen=True)
class MomentValue:
    """A second moment that is either finite or divergent (``value is None``)."""

    value: Optional[float] = None

    @classmethod
    def finite(cls, value: float) -> "MomentValue":
        return cls(float(value))

    @property
    def divergent(self) -> bool:
        return self.value is None

    def format(self, digits: int = 6) -> str:
        return "divergent" if self.divergent else f"{self.value:.{digits}g}"

    def __str__(self):
        return self.format()


DIVERGENT = MomentValue()


def make_packet(alpha: float) -> PowerLawPacket:
    """Build a packet; warns with NearEdgeWarning when alpha < 0.55."""
    packet = PowerLawPacket(alpha)
    if packet.near_edge:
        warnings.warn(
            f"alpha={packet.alpha} is close to the normalizability edge 1/2; "
            "numerical tolerances are relaxed",
            NearEdgeWarning,
            stacklevel=2,
        )
    return packet


def _ln_one_plus_square(x):
    ax = abs(x)
    if ax < 1.0:
        return math.log1p(ax * ax)
    return 2.0 * math.log(ax) + math.log1p(1.0 / (ax * ax))


def density_x_ln(packet: PowerLawPacket, x: float) -> float:
    """ln |phi(x)|^2 = ln N^2 - alpha ln(1 + x^2)."""
    return packet.ln_norm_sq - packet.alpha * _ln_one_plus_square(x)


def amplitude_x(packet: PowerLawPacket, x: float) -> float:
    return math.exp(0.5 * density_x_ln(packet, x))


def density_p_ln(packet: PowerLawPacket, p: float) -> float:
    """ln |phi~(p)|^2 for p != 0, computed entirely in logs.

    phi~(p) = 2^(1 - alpha/2) N / Gamma(alpha/2) |p|^((alpha-1)/2) K_((alpha-1)/2)(|p|)
    """
    if p == 0.0:
        raise DomainError("density_p_ln is undefined at p = 0; use amplitude_p for the limit")
    a = packet.alpha
    q = abs(p)
    ln_amp = (
        (1.0 - 0.5 * a) * _LN2
        + 0.5 * packet.ln_norm_sq
        - ln_gamma(0.5 * a)
        + packet.bessel_order * math.log(q)
        + bessel_k_ln(packet.bessel_order, q)
    )
    return 2.0 * ln_amp


def amplitude_p(packet: PowerLawPacket, p: float) -> float:
    """Momentum amplitude; at p = 0 the finite limit for alpha > 1.

    For alpha <= 1 the amplitude diverges at the origin (logarithmically
    at alpha = 1) and SingularAtZero is raised.
    """
    if p == 0.0:
        a = packet.alpha
        if a <= 1.0:
            raise SingularAtZero(f"momentum amplitude diverges at p = 0 for alpha = {a} <= 1")
        ln_limit = (
            0.5 * packet.ln_norm_sq
            + ln_gamma(0.5 * (a - 1.0))
            - 0.5 * _LN2
            - ln_gamma(0.5 * a)
        )
        return math.exp(ln_limit)
    return math.exp(0.5 * density_p_ln(packet, p))


def potential(packet: PowerLawPacket, x: float) -> float:
    """U(x) for which phi is a zero-energy eigenstate."""
    a = packet.alpha
    x2 = x * x
    return (a * (a + 1.0) * x2 - a) / (2.0 * (1.0 + x2) ** 2)


def position_second_moment(packet: PowerLawPacket) -> MomentValue:
    """<X^2>: divergent for alpha <= 3/2, else 1 / (2 alpha - 3)."""
    if packet.alpha <= 1.5:
        return DIVERGENT
    return MomentValue.finite(1.0 / (2.0 * packet.alpha - 3.0))


def momentum_second_moment(packet: PowerLawPacket) -> float:
    """<P^2> = int |phi'(x)|^2 dx = alpha (2 alpha - 1) / (4 (alpha + 1))."""
    a = packet.alpha
    return a * (2.0 * a - 1.0) / (4.0 * (a + 1.0))


def heisenberg_product(packet: PowerLawPacket) -> MomentValue:
    """Delta X * Delta P; both means vanish by parity."""
    x2 = position_second_moment(packet)
    if x2.divergent:
        return DIVERGENT
    return MomentValue.finite(math.sqrt(x2.value) * math.sqrt(momentum_second_moment(packet)))
