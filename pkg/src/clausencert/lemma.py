"""Closed forms for weighted Clausen sums at unit argument, with brute-force twins.

With ``h_n = (a)_n (b/2)_n ((b+1)/2)_n / ((c/2)_n ((c+1)/2)_n n!)`` the four
identities evaluate

    part 1:  sum (n+1)   h_n        part 3:  sum (n+1)**3 h_n
    part 2:  sum (n+1)**2 h_n       part 4:  sum h_n / (n+1)

through the Gamma prefactor and Gauss functions at -1.  Parts 1-3 expand the
weight in falling factorials, ``(n+1)**2 = n(n-1) + 3n + 1`` and
``(n+1)**3 = n(n-1)(n-2) + 6n(n-1) + 7n + 1``; each falling factorial shifts
the parameters by (1, 2, 2) and is summed again by the Driver-Johnston formula

    3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; 1)
        = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)) 2F1(a, b; c-a; -1).
"""

from __future__ import annotations

import math

from .errors import DomainError, PoleProximityError
from .series import DEFAULT_CONFIG, EvalConfig, SeriesValue, ratio_series_sum
from .specfun import gamma_prefactor, gamma_signed, gauss_2f1_at_minus_one, pochhammer

__all__ = [
    "LEMMA_PARTS",
    "lemma_margins",
    "lemma_sum_closed",
    "lemma4_closed_forms",
    "lemma_sum_brute",
    "falling_weighted_sum",
    "driver_johnston_rhs",
    "shifted_term",
]

LEMMA_PARTS = (1, 2, 3, 4)

# falling-factorial expansion coefficients of (n+1)**k, lowest degree first
_EXPANSION = {1: (1, 1), 2: (1, 3, 1), 3: (1, 7, 6, 1)}


def _check_part(part: int) -> int:
    if part not in LEMMA_PARTS:
        raise ValueError(f"lemma part must be one of {LEMMA_PARTS}, got {part!r}")
    return int(part)


def lemma_margins(part: int, a: float, b: float, c: float) -> list[tuple[str, float]]:
    """(factor, margin) pairs; every margin must exceed the configured delta."""
    part = _check_part(part)
    out = [("a", a), ("b", b), ("c", c)]
    if part in (1, 2, 3):
        out.append((f"c - a - b - {part}", c - a - b - part))
    else:
        out += [
            ("|a - 1|", abs(a - 1.0)),
            ("|b - 1|", abs(b - 1.0)),
            ("|b - 2|", abs(b - 2.0)),
            ("c - max(a+1, a+b-1)", c - max(a + 1.0, a + b - 1.0)),
        ]
    return out


def _require(part: int, a: float, b: float, c: float, cfg: EvalConfig) -> None:
    for name, m in lemma_margins(part, a, b, c):
        if not m > cfg.margin:
            raise PoleProximityError(name, m, cfg.margin)


def shifted_term(a: float, b: float, c: float, k: int, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """(a)_k (b)_{2k} / ((c-a)_k (c-a-b-k)_k) * 2F1(a+k, b+2k; c-a+k; -1), without the prefactor.

    This is the Driver-Johnston value of the k-th falling-factorial sum
    ``sum n(n-1)...(n-k+1) h_n`` divided by the common Gamma prefactor.
    """
    if k == 0:
        return gauss_2f1_at_minus_one(a, b, c - a, cfg).value
    coef = pochhammer(a, k) * pochhammer(b, 2 * k) / (pochhammer(c - a, k) * pochhammer(c - a - b - k, k))
    return coef * gauss_2f1_at_minus_one(a + k, b + 2 * k, c - a + k, cfg).value


def lemma4_closed_forms(a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> dict[str, float]:
    """Both printed closed forms of sum h_n / (n+1).

    ``statement`` subtracts (c-2)_2 / ((a-1)(b-2)_2); ``proof`` subtracts
    (c-2)(c-1) / ((a-1)(b-1)(b-2)).  They share the leading term
    (c-a-1)(c-a-b) Gamma(c)Gamma(c-a-b) / ((a-1)(b-1)(b-2)Gamma(c-b)Gamma(c-a))
    * 2F1(a-1, b-2; c-a-1; -1).
    """
    _require(4, a, b, c, cfg)
    denom = (a - 1.0) * (b - 1.0) * (b - 2.0)
    # (c-a-b) Gamma(c-a-b) = Gamma(c-a-b+1) stays finite across c = a + b
    lg_c, s_c = gamma_signed(c)
    lg_e, s_e = gamma_signed(c - a - b + 1.0)
    lg_cb, s_cb = gamma_signed(c - b)
    lg_ca, s_ca = gamma_signed(c - a)
    if s_cb == 0:
        lead = 0.0
    else:
        ratio = s_c * s_e * s_cb * s_ca * math.exp((lg_c - lg_ca) + (lg_e - lg_cb))
        g = gauss_2f1_at_minus_one(a - 1.0, b - 2.0, c - a - 1.0, cfg).value
        lead = (c - a - 1.0) * ratio / denom * g
    statement = lead - pochhammer(c - 2.0, 2) / ((a - 1.0) * pochhammer(b - 2.0, 2))
    proof = lead - (c - 2.0) * (c - 1.0) / denom
    return {"statement": statement, "proof": proof}


def lemma_sum_closed(part: int, a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Closed-form value of the part-th weighted sum (statement form for part 4)."""
    part = _check_part(part)
    if part == 4:
        return lemma4_closed_forms(a, b, c, cfg)["statement"]
    _require(part, a, b, c, cfg)
    pre = gamma_prefactor(a, b, c, cfg)
    coeffs = _EXPANSION[part]
    pieces = [m * shifted_term(a, b, c, k, cfg) for k, m in enumerate(coeffs)]
    return pre * math.fsum(pieces)


def _clausen_shifts(a: float, b: float, c: float):
    return [a, b / 2.0, (b + 1.0) / 2.0], [c / 2.0, (c + 1.0) / 2.0, 1.0]


def lemma_sum_brute(part: int, a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesValue:
    """Direct summation of the part-th weighted sum."""
    part = _check_part(part)
    _require(part, a, b, c, cfg)
    upper, lower = _clausen_shifts(a, b, c)
    if part == 4:
        # 1/(n+1): the (n+1)! in the denominator replaces n!
        lower[-1] = 2.0
        return ratio_series_sum(1.0, 0, upper, lower, cfg)
    return ratio_series_sum(1.0, 0, upper + [2.0] * part, lower + [1.0] * part, cfg)


def falling_weighted_sum(k: int, a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesValue:
    """Brute-force sum of n(n-1)...(n-k+1) h_n over n >= 0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not c - a - b - k > cfg.margin:
        raise PoleProximityError(f"c - a - b - {k}", c - a - b - k, cfg.margin)
    upper, lower = _clausen_shifts(a, b, c)
    # first nonzero term sits at n = k and equals k! h_k
    h = 1.0
    for n in range(k):
        h *= (a + n) * (b / 2.0 + n) * ((b + 1.0) / 2.0 + n) / ((c / 2.0 + n) * ((c + 1.0) / 2.0 + n) * (n + 1.0))
    first = math.factorial(k) * h
    roots = [-float(j) for j in range(k)]
    return ratio_series_sum(first, k, upper + [r + 1.0 for r in roots], lower + roots, cfg)


def driver_johnston_rhs(a: float, b: float, c: float, cfg: EvalConfig = DEFAULT_CONFIG) -> float:
    """Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b)) * 2F1(a, b; c-a; -1)."""
    if a < 0 or b < 0:
        raise DomainError("driver_johnston_rhs needs a, b >= 0")
    pre = gamma_prefactor(a, b, c, cfg)
    return pre * gauss_2f1_at_minus_one(a, b, c - a, cfg).value
