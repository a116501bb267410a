"""Numerical integration on finite intervals, the half line and the real line.

The workhorse is tanh-sinh (double exponential) quadrature, which tolerates
integrable endpoint singularities such as ``ln x`` at 0. The node generator
returns the distance of each node to the nearer endpoint exactly, so
integrands can be evaluated at points like 1e-250 from an endpoint without
cancellation. Infinite ranges are folded onto finite ones:

    int_0^inf f(p) dp = int_0^1 f(p) dp + int_0^1 f(1/r) / r**2 dt,  r = 1 - t

If tanh-sinh fails to settle on a finite interval the engine falls back to
adaptive Gauss-Kronrod (7/15) bisection.
"""

from dataclasses import dataclass
import functools
import math
from typing import Callable

import numpy as np

from .errors import NonFiniteSample

__all__ = [
    "QuadratureConfig",
    "IntegrationResult",
    "integrate_finite",
    "integrate_half_line",
    "integrate_real_line",
]

Integrand = Callable[[float], float]

_EPS = np.finfo(float).eps
_T_MAX = 6.0  # endpoint distance ~1e-264 at the outermost node
_MIN_LEVEL = 3


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance contract shared by every integration routine.

    ``max_levels`` caps the tanh-sinh step halvings (step 2**-max_levels);
    ``max_subdivisions`` caps the Gauss-Kronrod fallback.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_levels: int = 12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if self.max_levels < 1 or self.max_subdivisions < 1:
            raise ValueError("max_levels and max_subdivisions must be at least 1")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def scaled(self, factor: float) -> "QuadratureConfig":
        """Same caps, both tolerances multiplied by ``factor``."""
        return QuadratureConfig(
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            max_levels=self.max_levels,
            max_subdivisions=self.max_subdivisions,
        )


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __float__(self):
        return self.value


# -- tanh-sinh nodes on [0, 1] ------------------------------------------------


@functools.lru_cache(maxsize=None)
def _level_nodes(level: int):
    """Nodes first appearing at ``level`` (step h = 2**-level).

    Returns (s, r, w): node position s in [0, 1], its complement r = 1 - s
    (both accurate near their own endpoint) and the weight including h and
    the factor 1/2 from mapping [-1, 1] onto [0, 1].
    """
    h = 2.0 ** -level
    if level == 0:
        t = np.arange(-int(_T_MAX), int(_T_MAX) + 1, dtype=float)
    else:
        k = np.arange(1, int(round(2 * _T_MAX / h)) + 1, 2, dtype=float)
        t = -_T_MAX + k * h
    u = 0.5 * math.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    # distance of the node to the nearer end of [-1, 1], halved onto [0, 1]
    near = e / (1.0 + e)
    w = h * 0.5 * math.pi * np.cosh(t) * 2.0 * e / (1.0 + e) ** 2
    s = np.where(t < 0, near, 1.0 - near)
    r = np.where(t < 0, 1.0 - near, near)
    keep = (s > 0.0) & (r > 0.0)
    return s[keep].tolist(), r[keep].tolist(), w[keep].tolist()


def _sample(g, s, r, w):
    total = 0.0
    magnitude = 0.0
    edge = 0.0
    for si, ri, wi in zip(s, r, w):
        gi = g(si, ri)
        if not math.isfinite(gi):
            raise NonFiniteSample(si, gi)
        term = wi * gi
        total += term
        magnitude += abs(term)
        if min(si, ri) < 1e-200:
            edge = max(edge, abs(term))
    return total, magnitude, edge


def _tanh_sinh_unit(g, cfg: QuadratureConfig) -> IntegrationResult:
    """Integrate g over [0, 1]; g receives (s, 1 - s)."""
    s, r, w = _level_nodes(0)
    total, magnitude, edge = _sample(g, s, r, w)
    evaluations = len(s)
    error = math.inf
    for level in range(1, cfg.max_levels + 1):
        s, r, w = _level_nodes(level)
        new_total, new_mag, new_edge = _sample(g, s, r, w)
        evaluations += len(s)
        previous = total
        total = 0.5 * total + new_total
        magnitude = 0.5 * magnitude + new_mag
        edge = max(0.5 * edge, new_edge)
        error = max(abs(total - previous), 16 * _EPS * magnitude, edge)
        if level >= _MIN_LEVEL and error <= cfg.tolerance(total):
            return IntegrationResult(total, error, evaluations, True)
    return IntegrationResult(total, error, evaluations, False)


# -- Gauss-Kronrod fallback -----------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])


def _gk15(f, a, b):
    centre = 0.5 * (a + b)
    half = 0.5 * (b - a)
    xs = np.concatenate([centre - half * _XGK[:-1], [centre], (centre + half * _XGK[:-1])[::-1]])
    fx = np.empty(15)
    for i, x in enumerate(xs.tolist()):
        v = f(x)
        if not math.isfinite(v):
            raise NonFiniteSample(x, v)
        fx[i] = v
    left, mid, right = fx[:7], fx[7], fx[8:][::-1]
    pair = left + right
    kronrod = half * (_WGK[:-1] @ pair + _WGK[-1] * mid)
    gauss = half * (_WG[:-1] @ pair[1::2] + _WG[-1] * mid)
    return float(kronrod), float(abs(kronrod - gauss))


def _gauss_kronrod(f, a, b, cfg: QuadratureConfig) -> IntegrationResult:
    pieces = [(a, b, *_gk15(f, a, b))]
    evaluations = 15
    while True:
        value = math.fsum(p[2] for p in pieces)
        error = math.fsum(p[3] for p in pieces)
        if error <= cfg.tolerance(value):
            return IntegrationResult(value, error, evaluations, True)
        if len(pieces) >= cfg.max_subdivisions:
            break
        worst = max(range(len(pieces)), key=lambda i: pieces[i][3])
        lo, hi, _, _ = pieces[worst]
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi) or (hi - lo) <= 4 * _EPS * max(abs(lo), abs(hi)):
            break
        pieces[worst:worst + 1] = [(lo, mid, *_gk15(f, lo, mid)), (mid, hi, *_gk15(f, mid, hi))]
        evaluations += 30
    return IntegrationResult(value, error, evaluations, False)


# -- public entry points --------------------------------------------------------


def integrate_finite(
    f: Integrand, a: float, b: float, cfg: QuadratureConfig = QuadratureConfig()
) -> IntegrationResult:
    """Integrate ``f`` over [a, b].

    Integrable endpoint singularities are fine; ``f`` is never called at
    the endpoints themselves. Raises NonFiniteSample if ``f`` returns inf
    or nan at a node.
    """
    a = float(a)
    b = float(b)
    if not a < b:
        raise ValueError(f"integrate_finite needs a < b, got [{a}, {b}]")
    width = b - a

    def g(s, r):
        x = a + width * s if s <= 0.5 else b - width * r
        if x <= a or x >= b:
            return 0.0
        fx = f(x)
        if not math.isfinite(fx):
            raise NonFiniteSample(x, fx)
        return width * fx

    result = _tanh_sinh_unit(g, cfg)
    if result.converged:
        return result
    fallback = _gauss_kronrod(f, a, b, cfg)
    evaluations = result.evaluations + fallback.evaluations
    best = fallback if fallback.error_estimate < result.error_estimate else result
    return IntegrationResult(best.value, best.error_estimate, evaluations, fallback.converged)


def _combine(parts, cfg: QuadratureConfig) -> IntegrationResult:
    value = math.fsum(p.value for p in parts)
    error = math.fsum(p.error_estimate for p in parts)
    converged = all(p.converged for p in parts) and error <= cfg.tolerance(value)
    return IntegrationResult(value, error, sum(p.evaluations for p in parts), converged)


def integrate_half_line(f: Integrand, cfg: QuadratureConfig = QuadratureConfig()) -> IntegrationResult:
    """Integrate ``f`` over (0, inf), split at 1.

    The head (0, 1] absorbs logarithmic or algebraic singularities at 0;
    the tail is mapped to (0, 1] through p = 1/r. An integrand that decays
    too slowly leaves a non-negligible contribution at the outermost nodes
    and the result comes back with ``converged=False``.
    """
    piece_cfg = cfg.scaled(0.5)
    head = _tanh_sinh_unit(lambda s, r: f(s), piece_cfg)

    def tail_integrand(s, r):
        # r = 1 - t; p = 1/r covers [1, inf)
        fp = f(1.0 / r)
        return 0.0 if fp == 0.0 else fp / r / r

    tail = _tanh_sinh_unit(tail_integrand, piece_cfg)
    return _combine([head, tail], cfg)


def integrate_real_line(
    f: Integrand, cfg: QuadratureConfig = QuadratureConfig(), even: bool = False
) -> IntegrationResult:
    """Integrate ``f`` over the whole real line.

    With ``even=True`` only the positive half is sampled and doubled.
    """
    if even:
        half = integrate_half_line(f, cfg.scaled(0.5))
        return IntegrationResult(2.0 * half.value, 2.0 * half.error_estimate, half.evaluations, half.converged)
    return integrate_half_line(lambda x: f(x) + f(-x), cfg)
