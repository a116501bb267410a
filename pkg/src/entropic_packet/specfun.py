"""Log-gamma, digamma and the modified Bessel function K_nu for real order.

All three are pure functions of their float arguments. ``bessel_k_ln``
returns ``ln K_|nu|(x)`` so that callers working with squared amplitudes
never see overflow or underflow.
"""

import math

import numpy as np

from .errors import ConvergenceFailure, DomainError

__all__ = ["ln_gamma", "digamma", "bessel_k_ln", "bessel_k"]

EULER_GAMMA = 0.57721566490153286061
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)
_LN2 = math.log(2.0)

# B_{2k} for k = 1..9
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
)

_ASYMPTOTIC_FROM = 10.0
_TAYLOR_RADIUS = 0.25
_TAYLOR_TERMS = 32


def _zeta_minus_one(s: int) -> float:
    """zeta(s) - 1 for integer s >= 2, by Euler-Maclaurin summation."""
    n_cut = 12
    head = math.fsum(n ** -float(s) for n in range(2, n_cut))
    tail = n_cut ** (1.0 - s) / (s - 1) + 0.5 * n_cut ** (-float(s))
    rising = float(s)  # s (s+1) ... (s+2j-2)
    for j, b2j in enumerate(_BERNOULLI[:6], start=1):
        tail += b2j / math.factorial(2 * j) * rising * n_cut ** (-float(s) - 2 * j + 1)
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    return head + tail


# Taylor coefficients of ln Gamma about 1 and about 2:
#   ln G(1+e) = -gamma e + sum_{k>=2} (-1)^k zeta(k) e^k / k
#   ln G(2+e) = (1-gamma) e + sum_{k>=2} (-1)^k (zeta(k)-1) e^k / k
_ZM1 = [_zeta_minus_one(k) for k in range(2, _TAYLOR_TERMS + 2)]
_COEF_AT_1 = [-EULER_GAMMA] + [(-1) ** k * (1.0 + z) / k for k, z in enumerate(_ZM1, 2)]
_COEF_AT_2 = [1.0 - EULER_GAMMA] + [(-1) ** k * z / k for k, z in enumerate(_ZM1, 2)]


def _taylor(coefs, e):
    acc = 0.0
    for c in reversed(coefs):
        acc = acc * e + c
    return acc * e


def _stirling(z):
    """ln Gamma(z) for z >= 10 from the asymptotic series."""
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0
    power = inv
    for k, b2k in enumerate(_BERNOULLI[:8], start=1):
        series += b2k / (2 * k * (2 * k - 1)) * power
        power *= inv2
    return (z - 0.5) * math.log(z) - z + _HALF_LN_2PI + series


def _check_positive(name, x):
    if not (x > 0.0) or math.isinf(x):
        raise DomainError(f"{name} requires a finite positive argument, got {x!r}")


def ln_gamma(x: float) -> float:
    """Natural log of the gamma function for x > 0.

    Near the zeros of ln Gamma at 1 and 2 a Taylor series keeps the
    relative error small; elsewhere the Stirling series is used after
    shifting the argument up to 10.
    """
    x = float(x)
    _check_positive("ln_gamma", x)
    if abs(x - 1.0) < _TAYLOR_RADIUS:
        return _taylor(_COEF_AT_1, x - 1.0)
    if abs(x - 2.0) < _TAYLOR_RADIUS:
        return _taylor(_COEF_AT_2, x - 2.0)
    if x >= _ASYMPTOTIC_FROM:
        return _stirling(x)
    prod = 1.0
    z = x
    while z < _ASYMPTOTIC_FROM:
        prod *= z
        z += 1.0
    return _stirling(z) - math.log(prod)


def digamma(x: float) -> float:
    """psi(x) = d ln Gamma(x) / dx for x > 0."""
    x = float(x)
    _check_positive("digamma", x)
    shift = 0.0
    while x < _ASYMPTOTIC_FROM:
        shift -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k, b2k in enumerate(_BERNOULLI[:8], start=1):
        series += b2k / (2 * k) * power
        power *= inv2
    return shift + math.log(x) - 0.5 / x - series


# ---------------------------------------------------------------------------
# K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt
#
# The integrand is analytic in t and decays double-exponentially, so the
# plain trapezoidal rule in t converges geometrically. Everything is done
# in logs relative to the integrand peak, with exp(-x) factored out.
# ---------------------------------------------------------------------------

_DROP = 50.0  # integrand below peak * e^-50 is discarded
_MIN_INTERVALS = 32
_MAX_STEP = 0.5
_MAX_INTERVALS = 1 << 17
_TRAPEZOID_RTOL = 1e-13


def _ln_sinh(y):
    # valid for y > 0; -expm1 keeps 1 - e^{-2y} accurate near 0
    return y - _LN2 + np.log(-np.expm1(-2.0 * y))


def _ln_cosh(z):
    z = np.abs(z)
    return z - _LN2 + np.log1p(np.exp(-2.0 * z))


def _log_integrand(t, nu, ln_x):
    """ln of exp(-x (cosh t - 1)) cosh(nu t), overflow-free for large t."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        shifted = np.exp(ln_x + _LN2 + 2.0 * _ln_sinh(0.5 * t))
    return _ln_cosh(nu * t) - shifted


def _scalar_log_integrand(t, nu, ln_x):
    if t == 0.0:
        return 0.0
    half = 0.5 * t
    ln_sinh = half - _LN2 + math.log(-math.expm1(-t))
    z = nu * t
    ln_cosh = z - _LN2 + math.log1p(math.exp(-2.0 * z))
    arg = ln_x + _LN2 + 2.0 * ln_sinh
    return ln_cosh - (math.exp(arg) if arg < 709.0 else math.inf)


def _peak_location(nu, x, ln_x):
    """Maximiser t* >= 0 of the log-integrand (it is unimodal on t >= 0)."""
    if nu * nu <= x:
        return 0.0

    # sign of d/dt: nu tanh(nu t) - x sinh t, compared in logs
    def rising(t):
        ln_sinh = t - _LN2 + math.log(-math.expm1(-2.0 * t))
        return math.log(nu) + math.log(math.tanh(nu * t)) > ln_x + ln_sinh

    lo = 0.0
    hi = math.asinh(nu / x) if ln_x > -700.0 else math.log(2.0 * nu) - ln_x
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if rising(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cutoff_above(t_peak, level, nu, ln_x):
    # near t = 0 the log-integrand is about -x t^2 / 2 when x dominates
    step = min(1.0, 4.0 * math.exp(-0.5 * ln_x))
    lo = t_peak
    hi = t_peak + step
    while _scalar_log_integrand(hi, nu, ln_x) > level:
        lo = hi
        step *= 2.0
        hi = t_peak + step
    for _ in range(12):
        mid = 0.5 * (lo + hi)
        if _scalar_log_integrand(mid, nu, ln_x) > level:
            lo = mid
        else:
            hi = mid
    return hi


def _cutoff_below(t_peak, level, nu, ln_x):
    if _scalar_log_integrand(0.0, nu, ln_x) >= level:
        return 0.0
    lo, hi = 0.0, t_peak
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if _scalar_log_integrand(mid, nu, ln_x) < level:
            lo = mid
        else:
            hi = mid
    return lo


def bessel_k_ln(nu: float, x: float) -> float:
    """ln K_nu(x) for real order nu and x > 0.

    The order enters only through |nu|, so the result is exactly even in nu.
    """
    nu = abs(float(nu))
    x = float(x)
    if math.isnan(nu) or math.isinf(nu):
        raise DomainError(f"bessel_k_ln requires a finite order, got {nu!r}")
    _check_positive("bessel_k_ln", x)
    ln_x = math.log(x)

    t_peak = _peak_location(nu, x, ln_x)
    peak = _scalar_log_integrand(t_peak, nu, ln_x)
    t_hi = _cutoff_above(t_peak, peak - _DROP, nu, ln_x)
    t_lo = _cutoff_below(t_peak, peak - _DROP, nu, ln_x)

    width = t_hi - t_lo
    n = max(_MIN_INTERVALS, math.ceil(width / _MAX_STEP))
    h = width / n
    values = np.exp(_log_integrand(t_lo + h * np.arange(n + 1), nu, ln_x) - peak)
    total = h * (values.sum() - 0.5 * (values[0] + values[-1]))
    while n < _MAX_INTERVALS:
        n *= 2
        h *= 0.5
        mids = t_lo + h * np.arange(1, n, 2)
        refined = 0.5 * total + h * np.exp(_log_integrand(mids, nu, ln_x) - peak).sum()
        if abs(refined - total) <= _TRAPEZOID_RTOL * refined:
            return -x + peak + math.log(refined)
        total = refined
    raise ConvergenceFailure(
        f"trapezoidal sum for K_{nu}({x}) did not settle within {_MAX_INTERVALS} intervals"
    )


def bessel_k(nu: float, x: float) -> float:
    """K_nu(x); returns inf where the value exceeds the double range."""
    ln_k = bessel_k_ln(nu, x)
    try:
        return math.exp(ln_k)
    except OverflowError:
        return math.inf
