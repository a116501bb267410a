"""Independent oracles for every closed form the package exposes.

Each check pairs a closed-form value with a number obtained from first
principles (quadrature, finite differences, a numerical Fourier transform)
and records both in a ``CrosscheckReport``. The variance oracles never call
log-gamma or digamma: they normalize by a quadrature of the bare profile.
"""

from dataclasses import dataclass, field
import json
import math
from typing import Callable, List

from . import entropy
from .errors import ConvergenceFailure, DomainError, NonFiniteSample, SpecFunError
from .packet import (
    PowerLawPacket,
    amplitude_p,
    amplitude_x,
    density_p_ln,
    density_x_ln,
    momentum_second_moment,
    position_second_moment,
    potential,
)
from .quadrature import (
    QuadratureConfig,
    integrate_finite,
    integrate_half_line,
    integrate_real_line,
)

__all__ = [
    "CrosscheckEntry",
    "CrosscheckReport",
    "ft_numeric",
    "schrodinger_residual",
    "position_moment_oracle",
    "momentum_moment_oracle",
    "partial_position_moment",
    "run_all",
]

FT_MOMENTA = (0.5, 1.0, 2.0, 5.0)
RESIDUAL_POINTS = (0.0, 0.3, 1.0, 3.0, 10.0)
GROWTH_RADII = (1e3, 1e6)
MIN_GROWTH_RATIO = 2.0
MAX_HALF_PERIODS = 10_000

TOLERANCES = {
    "normalization": 1e-10,
    "parseval": 1e-8,
    "fourier": 1e-6,
    "s_x": 1e-8,
    "s_p": 1e-7,
    "position_moment": 1e-8,
    "momentum_moment": 1e-8,
    "residual": 1e-6,
}


@dataclass(frozen=True)
class CrosscheckEntry:
    """One closed-form value against its oracle.

    For ordinary entries ``passed`` means abs_diff <= tolerance. Growth
    probes for divergent moments instead store the required minimum ratio
    as ``reference`` and pass when the observed ratio exceeds it.
    """

    name: str
    reference: float
    oracle: float
    tolerance: float
    passed: bool
    abs_diff: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "abs_diff", abs(self.reference - self.oracle))

    @classmethod
    def compare(cls, name, reference, oracle, tolerance):
        diff = abs(reference - oracle)
        return cls(name, reference, oracle, tolerance, bool(diff <= tolerance))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "reference": self.reference,
            "oracle": self.oracle,
            "abs_diff": self.abs_diff,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class CrosscheckReport:
    alpha: float
    entries: List[CrosscheckEntry] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(e.passed for e in self.entries)

    def __getitem__(self, name: str) -> CrosscheckEntry:
        for entry in self.entries:
            if entry.name == name:
                return entry
        raise KeyError(name)

    def names(self):
        return [e.name for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "all_pass": self.all_pass,
            "entries": [e.to_dict() for e in self.entries],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _value(result, what):
    if not result.converged:
        raise ConvergenceFailure(f"{what}: quadrature did not converge (error {result.error_estimate!r})")
    return result.value


def _euler_average(partial_sums):
    v = list(partial_sums)
    while len(v) > 1:
        v = [0.5 * (v[i] + v[i + 1]) for i in range(len(v) - 1)]
    return v[0]


def ft_numeric(packet: PowerLawPacket, p: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """sqrt(2/pi) int_0^inf cos(p x) phi(x) dx, evaluated without Bessel functions.

    The half line is cut at the zeros of cos(p x); the resulting alternating
    series of half-period integrals is summed with Euler averaging of its
    partial sums, doubling the number of half-periods until two estimates
    agree.
    """
    p = float(p)
    if p < 0.0:
        raise DomainError("ft_numeric expects p >= 0; the transform is even in p")
    scale = math.sqrt(2.0 / math.pi)
    if p == 0.0:
        return scale * _value(
            integrate_half_line(lambda x: amplitude_x(packet, x), cfg), "ft_numeric(p=0)"
        )

    def f(x):
        return math.cos(p * x) * amplitude_x(packet, x)

    period = math.pi / p
    head = _value(integrate_finite(f, 0.0, 0.5 * period, cfg), "ft_numeric head")
    partial_sums = []
    running = head
    estimate = None
    n_target = 16
    while n_target <= MAX_HALF_PERIODS:
        while len(partial_sums) < n_target:
            lo = (len(partial_sums) + 0.5) * period
            running += _value(integrate_finite(f, lo, lo + period, cfg), "ft_numeric half-period")
            partial_sums.append(running)
        new_estimate = _euler_average(partial_sums)
        if estimate is not None and abs(new_estimate - estimate) <= cfg.tolerance(new_estimate):
            return scale * new_estimate
        estimate = new_estimate
        n_target *= 2
    raise ConvergenceFailure(
        f"alternating tail of the cosine transform did not settle within {MAX_HALF_PERIODS} half-periods"
    )


def schrodinger_residual(packet: PowerLawPacket, x: float) -> float:
    """|-phi''/2 + U phi| / |phi| with phi'' from a 5-point central stencil."""
    h = 1e-4 * max(1.0, abs(x))
    phi = amplitude_x(packet, x)
    second = (
        -amplitude_x(packet, x + 2 * h)
        + 16 * amplitude_x(packet, x + h)
        - 30 * phi
        + 16 * amplitude_x(packet, x - h)
        - amplitude_x(packet, x - 2 * h)
    ) / (12 * h * h)
    return abs(-0.5 * second + potential(packet, x) * phi) / abs(phi)


def _power_tail(alpha, power, radius):
    """int_R^inf x^power (1 + x^2)^-alpha dx by binomial expansion in 1/x^2.

    Requires R > 1 and 2 alpha - power > 1.
    """
    total = 0.0
    coef = 1.0  # binom(-alpha, k)
    k = 0
    while True:
        exponent = 2.0 * alpha + 2.0 * k - power - 1.0
        term = coef * radius ** (-exponent) / exponent
        total += term
        if abs(term) <= 1e-17 * abs(total) or k > 200:
            return total
        coef *= -(alpha + k) / (k + 1)
        k += 1


def _ln_one_plus_square(x):
    ax = abs(x)
    if ax < 1.0:
        return math.log1p(ax * ax)
    return 2.0 * math.log(ax) + math.log1p(1.0 / (ax * ax))


def _profile_moment(alpha, power, cfg, radius=10.0):
    """int_-inf^inf x^power (1 + x^2)^-alpha dx: quadrature on [-R, R] plus analytic tails."""

    def f(x):
        return x ** power * (1.0 + x * x) ** -alpha

    inner = _value(integrate_finite(f, 0.0, radius, cfg), "profile moment")
    return 2.0 * (inner + _power_tail(alpha, power, radius))


def position_moment_oracle(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """<X^2> for alpha > 3/2 as a ratio of two tail-corrected quadratures."""
    if packet.alpha <= 1.5:
        raise DomainError("<X^2> diverges for alpha <= 3/2")
    return _profile_moment(packet.alpha, 2, cfg) / _profile_moment(packet.alpha, 0, cfg)


def momentum_moment_oracle(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """int |phi'(x)|^2 dx with phi' = -alpha x (1 + x^2)^(-alpha/2 - 1), normalized numerically."""
    a = packet.alpha

    def derivative_sq(x):
        return math.exp(2.0 * math.log(a * x) - (a + 2.0) * _ln_one_plus_square(x))

    def profile_sq(x):
        return math.exp(-a * _ln_one_plus_square(x))

    num = _value(integrate_real_line(derivative_sq, cfg, even=True), "momentum moment")
    den = _value(integrate_real_line(profile_sq, cfg, even=True), "profile norm")
    return num / den


def partial_position_moment(packet: PowerLawPacket, radius: float, cfg: QuadratureConfig = QuadratureConfig()) -> float:
    """int_-R^R x^2 |phi(x)|^2 dx; [1, R] is integrated in log x."""

    def near(x):
        return x * x * math.exp(density_x_ln(packet, x))

    def far(s):
        x = math.exp(s)
        return x ** 3 * math.exp(density_x_ln(packet, x))

    inner = _value(integrate_finite(near, 0.0, 1.0, cfg), "partial moment")
    outer = _value(integrate_finite(far, 0.0, math.log(radius), cfg), "partial moment")
    return 2.0 * (inner + outer)


def _guarded(name: str, reference: float, tolerance: float, oracle: Callable[[], float]) -> CrosscheckEntry:
    try:
        value = oracle()
    except (SpecFunError, NonFiniteSample):
        return CrosscheckEntry(name, reference, math.nan, tolerance, False)
    return CrosscheckEntry.compare(name, reference, value, tolerance)


def run_all(packet: PowerLawPacket, cfg: QuadratureConfig = QuadratureConfig()) -> CrosscheckReport:
    """Every closed form against its oracle, in a fixed order."""
    relax = entropy.NEAR_EDGE_RELAXATION if packet.near_edge else 1.0
    tol = {k: v * relax for k, v in TOLERANCES.items()}
    work_cfg = cfg.scaled(relax)
    report = CrosscheckReport(packet.alpha)
    add = report.entries.append

    add(_guarded(
        "normalization", 1.0, tol["normalization"],
        lambda: _value(
            integrate_real_line(lambda x: math.exp(density_x_ln(packet, x)), work_cfg, even=True),
            "normalization",
        ),
    ))

    def parseval():
        def rho(p):
            ln_rho = density_p_ln(packet, p)
            return 0.0 if ln_rho < -745.0 else math.exp(ln_rho)

        return 2.0 * _value(integrate_half_line(rho, work_cfg.scaled(0.5)), "parseval")

    add(_guarded("parseval", 1.0, tol["parseval"], parseval))

    momenta = ((0.0,) if packet.alpha > 1.0 else ()) + FT_MOMENTA
    for p in momenta:
        add(_guarded(
            f"fourier_p={p:g}", amplitude_p(packet, p), tol["fourier"],
            lambda p=p: ft_numeric(packet, p, work_cfg),
        ))

    add(_guarded("s_x", entropy.s_x_closed(packet), tol["s_x"], lambda: entropy.s_x_numeric(packet, cfg)))
    try:
        s_p_closed = entropy.s_p_semi_closed(packet, cfg)
    except SpecFunError:
        s_p_closed = math.nan
    add(_guarded("s_p", s_p_closed, tol["s_p"], lambda: entropy.s_p_numeric(packet, cfg)))

    x2 = position_second_moment(packet)
    if x2.divergent:
        def growth():
            small, large = (partial_position_moment(packet, r, work_cfg) for r in GROWTH_RADII)
            return large / small

        try:
            ratio = growth()
        except (SpecFunError, NonFiniteSample):
            ratio = math.nan
        add(CrosscheckEntry(
            "position_moment_divergence_growth", MIN_GROWTH_RATIO, ratio, 0.0,
            bool(ratio > MIN_GROWTH_RATIO),
        ))
    else:
        add(_guarded(
            "position_moment", x2.value, tol["position_moment"],
            lambda: position_moment_oracle(packet, work_cfg),
        ))

    add(_guarded(
        "momentum_moment", momentum_second_moment(packet), tol["momentum_moment"],
        lambda: momentum_moment_oracle(packet, work_cfg),
    ))

    for x in RESIDUAL_POINTS:
        add(_guarded(f"residual_x={x:g}", 0.0, tol["residual"], lambda x=x: schrodinger_residual(packet, x)))
    return report
