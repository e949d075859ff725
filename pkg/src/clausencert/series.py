"""Summation engine for hypergeometric-type series.

Two kinds of series appear everywhere in this package:

* positive series at unit argument whose terms decay like ``k**-p`` with
  ``p`` barely above one (Clausen sums, weighted coefficient sums), and
* series at argument 1/2 obtained from the Euler transform of an
  alternating series, which decay geometrically.

Both are described by a first term and the rational term ratio
``t[k+1] / t[k] = z * prod(k + upper) / prod(k + lower)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli, comb, zeta

from .errors import DomainError

__all__ = [
    "EvalConfig",
    "SeriesValue",
    "ratio_series_sum",
    "geometric_series_sum",
    "alternating_series_sum",
]

_EPS = np.finfo(float).eps
_MIN_TERMS = 256
_MAX_ASYMPTOTIC_ORDER = 40


@dataclass(frozen=True)
class EvalConfig:
    """Numerical knobs shared by every evaluation.

    ``margin`` is the minimum distance by which every strict inequality in a
    precondition must hold before anything is evaluated.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_terms: int = 200_000
    margin: float = 1e-9

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.margin > 0):
            raise ValueError("rel_tol, abs_tol and margin must be positive")
        if int(self.max_terms) != self.max_terms or self.max_terms < 10:
            raise ValueError("max_terms must be an integer >= 10")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class SeriesValue:
    """A summed series.

    ``tail_bound`` is the absolute truncation error estimate of ``value``.
    For alternating sums ``bracket`` holds the last two partial sums, which
    enclose the limit.
    """

    value: float
    terms_used: int
    tail_bound: float
    converged: bool
    bracket: tuple[float, float] | None = None

    def __float__(self) -> float:
        return self.value


def _check_lower(start: int, stop: int, lower) -> None:
    for l in lower:
        if l <= 0 and float(l).is_integer() and start <= -l < stop:
            raise DomainError(f"lower parameter {l} meets a pole at index {-int(l)}")


def _term_ratios(ks: np.ndarray, upper, lower, z: float) -> np.ndarray:
    num = np.ones_like(ks)
    den = np.ones_like(ks)
    for u in upper:
        num = num * (ks + u)
    for l in lower:
        den = den * (ks + l)
    return z * num / den


def _terms(first: float, start: int, stop: int, upper, lower, z: float) -> np.ndarray:
    """Terms t[start..stop] inclusive."""
    ks = np.arange(start, stop, dtype=float)
    ratios = _term_ratios(ks, upper, lower, z)
    out = np.empty(stop - start + 1)
    out[0] = first
    with np.errstate(over="ignore", under="ignore"):
        out[1:] = first * np.cumprod(ratios)
    return out


@lru_cache(maxsize=None)
def _bernoulli_numbers(m: int) -> tuple[float, ...]:
    return tuple(float(v) for v in bernoulli(m))


def _bernoulli_poly(m: int, x: float) -> float:
    nums = _bernoulli_numbers(m)
    return math.fsum(float(comb(m, k, exact=True)) * nums[k] * x ** (m - k) for k in range(m + 1))


def _stirling_difference_coeffs(upper, lower, order: int) -> list[float]:
    """Coefficients D_n of sum lnG(x+u) - sum lnG(x+l) = -p ln x + sum D_n x**-n."""
    out = []
    for n in range(1, order + 1):
        s = math.fsum(_bernoulli_poly(n + 1, u) for u in upper) - math.fsum(
            _bernoulli_poly(n + 1, l) for l in lower
        )
        out.append((-1) ** (n + 1) * s / (n * (n + 1)))
    return out


def _exp_series(d: list[float]) -> list[float]:
    """Power-series coefficients of exp(sum_{n>=1} d[n-1] y**n)."""
    e = [1.0]
    for j in range(1, len(d) + 1):
        e.append(math.fsum(n * d[n - 1] * e[j - n] for n in range(1, j + 1)) / j)
    return e


def _asymptotic_tail(t_n: float, n: int, upper, lower, p: float, rtol: float) -> tuple[float, float, int]:
    """Estimate sum_{k>n} t_k from the large-k expansion of the term.

    t_k = t_n (n/k)**p exp(S(k) - S(n)) with S the Stirling remainder of the
    Gamma-function ratio, so the tail is a combination of Hurwitz zeta values.
    Returns (tail, error_estimate, order_used).
    """
    log_scale = p * math.log(n + 1)
    if log_scale > 600.0:
        # terms fall so fast that the remainder is far below the last term
        crude = abs(t_n) * (n + 1) / (p - 1) * math.exp(-p / (n + 1))
        return 0.0, crude, 0
    d = _stirling_difference_coeffs(upper, lower, _MAX_ASYMPTOTIC_ORDER)
    s_n = math.fsum(dn * float(n) ** (-(i + 1)) for i, dn in enumerate(d))
    e = _exp_series(d)
    scale = t_n * math.exp(p * math.log(n) - s_n)
    pieces = []
    err = math.inf
    order = 0
    for j, ej in enumerate(e):
        piece = scale * ej * float(zeta(p + j, n + 1))
        pieces.append(piece)
        order = j
        if j >= 2:
            err = abs(piece) + abs(pieces[-2])
            if err <= rtol * abs(math.fsum(pieces)):
                break
    tail = math.fsum(pieces)
    err = min(err, abs(tail)) + 4 * _EPS * abs(tail) * (order + 1)
    return tail, err, order


def ratio_series_sum(first: float, start: int, upper, lower, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesValue:
    """Sum t[start] + t[start+1] + ... for a series with unit argument.

    ``t[start] = first`` and consecutive terms satisfy
    ``t[k+1] / t[k] = prod(k + upper) / prod(k + lower)`` with equally many
    upper and lower shifts.  Convergence needs ``sum(lower) - sum(upper) > 1``.
    A finite head is summed exactly (``math.fsum``); the remainder comes from
    the asymptotic expansion of the term.
    """
    upper = tuple(float(u) for u in upper)
    lower = tuple(float(l) for l in lower)
    if len(upper) != len(lower):
        raise ValueError("upper and lower shift lists must have equal length")
    if first == 0.0:
        return SeriesValue(0.0, 1, 0.0, True)
    p = math.fsum(lower) - math.fsum(upper)
    if p - 1.0 <= cfg.margin:
        raise DomainError(f"series diverges: decay exponent margin p - 1 = {p - 1.0:.6g}")
    widest = max((abs(s) for s in upper + lower), default=0.0)
    n = start + max(_MIN_TERMS, int(40 * widest) + 1)
    n = min(n, start + cfg.max_terms - 1)
    _check_lower(start, n + 1, lower)
    terms = _terms(first, start, n, upper, lower, 1.0)
    head = math.fsum(terms)
    t_n = float(terms[-1])
    if t_n == 0.0:
        return SeriesValue(head, len(terms), 0.0, True)
    tail, err, _ = _asymptotic_tail(t_n, n, upper, lower, p, cfg.rel_tol * 1e-3)
    value = head + tail
    # an unreliable expansion (widest shift comparable to n) shows up as a large err
    converged = math.isfinite(value) and err <= cfg.tolerance(value)
    return SeriesValue(float(value), len(terms), float(err), bool(converged))


def geometric_series_sum(first: float, upper, lower, z: float, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesValue:
    """Sum a hypergeometric series in ``z`` with |z| < 1, starting at index 0.

    The ratio is ``z (k+u1)...(k+ur) / ((k+l1)...(k+ls) (k+1))``; pass the
    ``(k+1)`` factor explicitly among ``lower``.  The tail after term k is
    bounded by ``|t_k| rho / (1 - rho)`` where ``rho`` majorizes every later
    ratio (each factor ``(j+u)/(j+l)`` is monotone in j).
    """
    upper = tuple(float(u) for u in upper)
    lower = tuple(float(l) for l in lower)
    if not abs(z) < 1:
        raise DomainError("geometric_series_sum needs |z| < 1")
    if len(upper) != len(lower):
        raise ValueError("pad upper/lower to equal length")
    if first == 0.0:
        return SeriesValue(0.0, 1, 0.0, True)
    acc = [first]
    t = first
    k = 0
    while True:
        num = 1.0
        den = 1.0
        for u in upper:
            num *= k + u
        for l in lower:
            if k + l == 0:
                raise DomainError(f"lower parameter {l} meets a pole at index {k}")
            den *= k + l
        if num == 0.0:
            return SeriesValue(math.fsum(acc), len(acc), 0.0, True)
        t = t * z * num / den
        acc.append(t)
        k += 1
        if all(k + s > 0 for s in upper + lower):
            rho = abs(z)
            for u, l in zip(upper, lower):
                rho *= max(1.0, (k + u) / (k + l))
            if rho < 1.0:
                bound = abs(t) * rho / (1.0 - rho)
                value = math.fsum(acc)
                if bound <= 1e-3 * cfg.tolerance(value) or bound == 0.0:
                    return SeriesValue(value, len(acc), bound, True)
        if len(acc) >= cfg.max_terms:
            value = math.fsum(acc)
            return SeriesValue(value, len(acc), math.inf, False)


def alternating_series_sum(a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG, chunk: int = 4096) -> SeriesValue:
    """Sum ``sum_k (a)_k (b)_k / ((c)_k k!) (-1)**k`` term by term.

    The ratio modulus ``(a+k)(b+k) / ((c+k)(k+1))`` drops below one at an index
    that is linear in the parameters and stays below one afterwards when
    ``c > a + b``; from there on consecutive partial sums bracket the limit.
    The reported value is the midpoint of the last bracket and ``tail_bound``
    is its half-width.
    """
    if c - a - b <= 0:
        raise DomainError("alternating summation needs c > a + b")
    upper, lower = (a, b), (c, 1.0)
    k0 = max(0.0, (a * b - c) / (c + 1.0 - a - b), 1.0 - a, 1.0 - b)
    k0 = int(math.ceil(k0))
    partial = []
    t = 1.0
    k = 0
    s_prev = s_cur = 0.0
    while k < cfg.max_terms:
        stop = min(k + chunk, cfg.max_terms)
        _check_lower(k, stop, lower)
        ratios = _term_ratios(np.arange(k, stop, dtype=float), upper, lower, -1.0)
        block = np.empty(stop - k)
        block[0] = t
        with np.errstate(over="ignore", under="ignore"):
            block[1:] = t * np.cumprod(ratios[:-1])
        partial.append(math.fsum(block))
        s_cur = math.fsum(partial)
        s_prev = s_cur - float(block[-1])
        t = float(block[-1] * ratios[-1])
        k = stop
        if block[-1] == 0.0 or t == 0.0:
            return SeriesValue(s_cur, k, 0.0, True, (s_cur, s_cur))
        if k >= k0:
            mid = s_cur + t / 2.0
            if abs(t) / 2.0 <= cfg.tolerance(mid):
                lo, hi = sorted((s_cur, s_cur + t))
                return SeriesValue(mid, k, abs(t) / 2.0, True, (lo, hi))
    if k >= k0 + 1:
        lo, hi = sorted((s_prev, s_cur))
        return SeriesValue(s_cur, k, hi - lo, False, (lo, hi))
    return SeriesValue(s_cur, k, math.inf, False)
