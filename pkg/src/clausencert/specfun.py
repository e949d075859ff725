"""Special-function kernel: log-Gamma, Pochhammer symbols, 2F1 at -1, 3F2 at 1.

All arguments are real.  Routines that take an :class:`EvalConfig` return a
:class:`SeriesValue`; the rest return plain floats.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import zeta

from .errors import DomainError, PoleProximityError
from .series import (
    DEFAULT_CONFIG,
    EvalConfig,
    SeriesValue,
    alternating_series_sum,
    geometric_series_sum,
    ratio_series_sum,
)

__all__ = [
    "EvalConfig",
    "SeriesValue",
    "log_gamma",
    "gamma_signed",
    "pochhammer",
    "gamma_prefactor",
    "gauss_2f1_at_minus_one",
    "clausen_3f2_at_one",
]

_EULER_GAMMA = 0.57721566490153286060651209
_HALF_LOG_2PI = 0.91893853320467274178032973640562

# Taylor coefficients of lnGamma about 1 and about 2
_TAYLOR_ORDER = 60
_ZETA_MINUS_ONE = np.array([float(zeta(k, 2)) for k in range(2, _TAYLOR_ORDER + 1)])
_K = np.arange(2, _TAYLOR_ORDER + 1, dtype=float)
_SIGN = np.where(_K % 2 == 0, 1.0, -1.0)
_C1 = np.concatenate(([0.0, -_EULER_GAMMA], _SIGN * (1.0 + _ZETA_MINUS_ONE) / _K))
_C2 = np.concatenate(([0.0, 1.0 - _EULER_GAMMA], _SIGN * _ZETA_MINUS_ONE / _K))

# B_2k / (2k (2k-1)) for the Stirling series, k = 1..10
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_STIRLING_FROM = 12.0


def _horner(coeffs: np.ndarray, z: float) -> float:
    acc = 0.0
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Taylor series about 1 and 2 cover [0.5, 2.5), which keeps full relative
    accuracy next to the zeros at 1 and 2; larger arguments are reduced into
    that window by the recurrence up to 12 and use the Stirling series beyond.
    """
    x = float(x)
    if not x > 0 or math.isinf(x):
        raise DomainError(f"log_gamma needs a finite positive argument, got x = {x!r}")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return log_gamma(x + 1.0) - math.log(x)
    if x < 1.5:
        return _horner(_C1, x - 1.0)
    if x < 2.5:
        return _horner(_C2, x - 2.0)
    if x < _STIRLING_FROM:
        prod = 1.0
        while x >= 2.5:
            x -= 1.0
            prod *= x
        return math.log(prod) + _horner(_C2, x - 2.0)
    inv = 1.0 / x
    inv2 = inv * inv
    corr = 0.0
    for c in reversed(_STIRLING):
        corr = corr * inv2 + c
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + corr * inv


def gamma_signed(x: float) -> tuple[float, int]:
    """Return (log|Gamma(x)|, sign Gamma(x)) for real x off the poles.

    Negative arguments go through the reflection formula.  At a pole the
    sign is 0 and the log is +inf.
    """
    if x > 0:
        return log_gamma(x), 1
    if float(x).is_integer():
        return math.inf, 0
    s = math.sin(math.pi * x)
    return math.log(math.pi) - math.log(abs(s)) - log_gamma(1.0 - x), (1 if s > 0 else -1)


def pochhammer(x: float, n: int) -> float:
    """Rising factorial (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    out = 1.0
    for k in range(int(n)):
        out *= x + k
    return out


def gamma_prefactor(a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)) for a, b >= 0, c > a + b."""
    if a < 0 or b < 0:
        raise DomainError(f"gamma_prefactor needs a, b >= 0, got a = {a!r}, b = {b!r}")
    margin = c - a - b
    if not margin > cfg.margin:
        raise PoleProximityError("c - a - b", margin, cfg.margin)
    # grouped so that a = 0 (or b = 0) cancels exactly
    log_p = (log_gamma(c) - log_gamma(c - a)) + (log_gamma(margin) - log_gamma(c - b))
    return math.exp(log_p)


def _euler_transform_2f1(a: float, b: float, c: float, cfg: EvalConfig) -> SeriesValue:
    """2F1(a, b; c; -1) = 2**-a 2F1(a, c-b; c; 1/2), the Euler transform.

    Of the two equivalent forms (swap a and b) pick the one whose terms keep
    one sign, falling back to the one with the smaller leading parameter.
    """
    options = [(a, c - b), (b, c - a)]
    options.sort(key=lambda pq: (not (pq[0] >= 0 and pq[1] >= 0), abs(pq[0]) + abs(pq[1])))
    p, q = options[0]
    inner = geometric_series_sum(1.0, (p, q), (c, 1.0), 0.5, cfg)
    scale = 2.0 ** (-p)
    return SeriesValue(
        scale * inner.value,
        inner.terms_used,
        scale * inner.tail_bound,
        inner.converged,
    )


def gauss_2f1_at_minus_one(
    a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG, method: str = "euler"
) -> SeriesValue:
    """Gauss 2F1(a, b; c; -1).

    ``method="euler"`` (default) sums the Euler-transformed series at 1/2,
    which converges geometrically for every real a, b and c > 0 and gives the
    analytic continuation when the series at -1 diverges.
    ``method="direct"`` sums the alternating series itself; it needs
    ``c - a - b`` above the margin and reports a bracket of partial sums.
    """
    if not c > 0:
        raise DomainError(f"lower parameter must be positive, got c = {c!r}")
    if a == 0 or b == 0:
        return SeriesValue(1.0, 1, 0.0, True, (1.0, 1.0) if method == "direct" else None)
    if method == "euler":
        return _euler_transform_2f1(a, b, c, cfg)
    if method == "direct":
        margin = c - a - b
        if not margin > cfg.margin:
            raise PoleProximityError("c - a - b", margin, cfg.margin)
        return alternating_series_sum(a, b, c, cfg)
    raise ValueError(f"unknown method {method!r}")


def clausen_3f2_at_one(a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesValue:
    """3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; 1) by direct summation.

    Terms decay like ``n**(a+b-c-1)``.  The head is summed exactly and the
    remainder comes from the asymptotic expansion of the term.
    """
    if a < 0 or b < 0:
        raise DomainError(f"clausen_3f2_at_one needs a, b >= 0, got a = {a!r}, b = {b!r}")
    margin = c - a - b
    if not margin > cfg.margin:
        raise PoleProximityError("c - a - b", margin, cfg.margin)
    return ratio_series_sum(1.0, 0, (a, b / 2.0, (b + 1.0) / 2.0), (c / 2.0, (c + 1.0) / 2.0, 1.0), cfg)
