"""The convolution operator f -> z 3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; z) * f.

Coefficients of the image are ``A_n = B_n a_n`` with

    B_n = (|a|)_{n-1} (|b|/2)_{n-1} ((|b|+1)/2)_{n-1}
          / ((c/2)_{n-1} ((c+1)/2)_{n-1} (n-1)!)

This module also holds the brute-force oracle: direct summation of the
weighted coefficient sums whose smallness certifies class membership.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NormalizationError
from .series import DEFAULT_CONFIG, EvalConfig, SeriesValue, ratio_series_sum

__all__ = [
    "OperatorParams",
    "ClassKind",
    "ClassSpec",
    "SourceKind",
    "SourceSpec",
    "CoefficientSeries",
    "hyper_coefficient",
    "hyper_coefficients",
    "log_hyper_coefficients",
    "apply_operator",
    "coefficient_bound",
    "worst_case_T",
    "class_budget",
]


@dataclass(frozen=True)
class OperatorParams:
    """Moduli |a|, |b| and the real parameter c of the operator."""

    a_mod: float
    b_mod: float
    c: float
    raw_a: complex | None = field(default=None, compare=False)
    raw_b: complex | None = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("a_mod", "b_mod", "c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and positive, got {v!r}")
        if self.raw_a is not None and abs(self.raw_a) != self.a_mod:
            raise ValueError("a_mod must equal |raw_a|")
        if self.raw_b is not None and abs(self.raw_b) != self.b_mod:
            raise ValueError("b_mod must equal |raw_b|")

    @classmethod
    def from_complex(cls, a: complex, b: complex, c: float) -> "OperatorParams":
        a, b = complex(a), complex(b)
        return cls(abs(a), abs(b), float(c), raw_a=a, raw_b=b)

    @property
    def upper(self) -> tuple[float, float, float]:
        return (self.a_mod, self.b_mod / 2.0, (self.b_mod + 1.0) / 2.0)

    @property
    def lower(self) -> tuple[float, float]:
        return (self.c / 2.0, (self.c + 1.0) / 2.0)

    @property
    def excess(self) -> float:
        """c - |a| - |b|; the operator series at z = 1 converges iff positive."""
        return self.c - self.a_mod - self.b_mod


class ClassKind(enum.Enum):
    STARLIKE_LAMBDA = "StarlikeLambda"
    CONVEX_LAMBDA = "ConvexLambda"
    UCV = "UCV"
    SP = "Sp"


@dataclass(frozen=True)
class ClassSpec:
    kind: ClassKind
    lam: float | None = None

    def __post_init__(self):
        kind = ClassKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind in (ClassKind.STARLIKE_LAMBDA, ClassKind.CONVEX_LAMBDA):
            if self.lam is None or not (0 < self.lam <= 1):
                raise DomainError(f"lambda must lie in (0, 1], got {self.lam!r}")
        elif self.lam is not None:
            raise ValueError(f"{kind.value} takes no lambda")

    @classmethod
    def starlike(cls, lam: float) -> "ClassSpec":
        return cls(ClassKind.STARLIKE_LAMBDA, lam)

    @classmethod
    def convex(cls, lam: float) -> "ClassSpec":
        return cls(ClassKind.CONVEX_LAMBDA, lam)

    @classmethod
    def ucv(cls) -> "ClassSpec":
        return cls(ClassKind.UCV)

    @classmethod
    def sp(cls) -> "ClassSpec":
        return cls(ClassKind.SP)


class SourceKind(enum.Enum):
    SELF = "SelfFunction"
    R_BETA = "RBeta"
    FULL_S = "FullClassS"


@dataclass(frozen=True)
class SourceSpec:
    kind: SourceKind
    beta: float | None = None

    def __post_init__(self):
        kind = SourceKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SourceKind.R_BETA:
            if self.beta is None or not (0 <= self.beta < 1):
                raise DomainError(f"beta must lie in [0, 1), got {self.beta!r}")
        elif self.beta is not None:
            raise ValueError(f"{kind.value} takes no beta")

    @classmethod
    def self_function(cls) -> "SourceSpec":
        return cls(SourceKind.SELF)

    @classmethod
    def r_beta(cls, beta: float) -> "SourceSpec":
        return cls(SourceKind.R_BETA, beta)

    @classmethod
    def full_s(cls) -> "SourceSpec":
        return cls(SourceKind.FULL_S)


@dataclass(frozen=True)
class CoefficientSeries:
    """Truncated image coefficients A_1..A_N (``coefficients[0]`` is A_1)."""

    coefficients: np.ndarray
    params: OperatorParams

    def __post_init__(self):
        arr = np.array(self.coefficients, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a nonempty 1-d sequence")
        if arr[0] != 1.0:
            raise NormalizationError("A_1 must equal 1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coefficients", arr)

    @property
    def N(self) -> int:
        return self.coefficients.size

    def __getitem__(self, n: int) -> float:
        """A_n, 1-based."""
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return float(self.coefficients[n - 1])


def _step_ratio(params: OperatorParams, k: int) -> float:
    # B_{k+2} / B_{k+1}; the b-pair enters as one product so its order is immaterial
    a, bh, bh1 = params.upper
    ch, ch1 = params.lower
    return ((a + k) * ((bh + k) * (bh1 + k))) / (((ch + k) * (ch1 + k)) * (k + 1.0))


def hyper_coefficient(params: OperatorParams, n: int) -> float:
    """B_n, the factor multiplying a_n.  B_1 = 1.

    Built by the product of consecutive ratios; ``log_hyper_coefficients``
    covers values outside the double range.
    """
    if n < 1 or int(n) != n:
        raise ValueError("n must be an integer >= 1")
    out = 1.0
    for k in range(int(n) - 1):
        out *= _step_ratio(params, k)
    return out


def log_hyper_coefficients(params: OperatorParams, N: int) -> np.ndarray:
    """log B_1 .. log B_N (all B_n are positive)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    k = np.arange(N - 1, dtype=float)
    a, bh, bh1 = params.upper
    ch, ch1 = params.lower
    steps = (np.log(a + k) + np.log(bh + k) + np.log(bh1 + k)) - (
        np.log(ch + k) + np.log(ch1 + k) + np.log1p(k)
    )
    return np.concatenate(([0.0], np.cumsum(steps)))


def hyper_coefficients(params: OperatorParams, N: int) -> np.ndarray:
    """B_1 .. B_N as floats.

    Uses the running product while it stays inside [1e-300, 1e300] and falls
    back to the log-space sum otherwise (entries may then under/overflow to
    0 or inf).
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    out = np.empty(N)
    out[0] = 1.0
    b = 1.0
    for k in range(N - 1):
        b *= _step_ratio(params, k)
        if not (1e-300 <= b <= 1e300):
            with np.errstate(over="ignore", under="ignore"):
                out[k + 1 :] = np.exp(log_hyper_coefficients(params, N)[k + 1 :])
            return out
        out[k + 1] = b
    return out


def apply_operator(params: OperatorParams, f_coeffs, N: int | None = None) -> CoefficientSeries:
    """Image coefficients A_n = B_n a_n for n = 1..N.

    ``f_coeffs`` lists a_1, a_2, ...; a_1 must be exactly 1.  Signed a_n are
    accepted and passed through.
    """
    f = np.asarray(f_coeffs, dtype=float)
    if f.ndim != 1 or f.size == 0:
        raise ValueError("f_coeffs must be a nonempty 1-d sequence")
    if f[0] != 1.0:
        raise NormalizationError(f"a_1 must equal 1, got {f[0]!r}")
    if N is None:
        N = f.size
    if not 1 <= N <= f.size:
        raise ValueError(f"N must lie in [1, {f.size}], got {N}")
    return CoefficientSeries(hyper_coefficients(params, N) * f[:N], params)


def coefficient_bound(source: SourceSpec, params: OperatorParams, n: int) -> float:
    """Worst-case |A_n| over all f in the source family."""
    if n < 2:
        raise ValueError("n must be >= 2")
    b = hyper_coefficient(params, n)
    if source.kind is SourceKind.FULL_S:
        return b * n
    if source.kind is SourceKind.R_BETA:
        return b * 2.0 * (1.0 - source.beta) / n
    return b


def class_budget(cls: ClassSpec) -> float:
    """Right-hand side of the weighted coefficient condition (lambda or 1)."""
    if cls.kind in (ClassKind.STARLIKE_LAMBDA, ClassKind.CONVEX_LAMBDA):
        return cls.lam
    return 1.0


def _weight_factors(cls: ClassSpec, source: SourceSpec):
    """Weight w(n) * bound(n) as const * prod(n + g) / prod(n + h)."""
    const = 1.0
    num: list[float] = []
    den: list[float] = []
    if cls.kind is ClassKind.STARLIKE_LAMBDA:
        num += [cls.lam - 1.0]  # n + lambda - 1
    elif cls.kind is ClassKind.CONVEX_LAMBDA:
        num += [0.0, cls.lam - 1.0]  # n (n + lambda - 1)
    elif cls.kind is ClassKind.UCV:
        const *= 2.0
        num += [0.0, -0.5]  # n (2n - 1)
    else:
        const *= 2.0
        num += [-0.5]  # 2n - 1
    if source.kind is SourceKind.FULL_S:
        num += [0.0]
    elif source.kind is SourceKind.R_BETA:
        const *= 2.0 * (1.0 - source.beta)
        den += [0.0]
    # cancel n against 1/n
    for g in list(den):
        if g in num:
            num.remove(g)
            den.remove(g)
    return const, num, den


def worst_case_T(
    cls: ClassSpec, source: SourceSpec, params: OperatorParams, cfg: EvalConfig = DEFAULT_CONFIG
) -> SeriesValue:
    """Brute-force sum T = sum_{n>=2} weight(n) * bound(n) * B_n.

    The weight is (n+lambda-1), n(n+lambda-1), n(2n-1) or (2n-1) for the four
    classes; the bound is 1, 2(1-beta)/n or n for the three source families.
    Membership is certified when T <= class_budget(cls).
    """
    const, num, den = _weight_factors(cls, source)
    degree = len(num) - len(den)
    margin = params.excess - degree
    if not margin > cfg.margin:
        raise DomainError(
            f"weighted series diverges: need c > |a|+|b|+{degree}, margin {margin:.6g}"
        )
    # index m = n - 1 >= 1 so that B_n is the 3F2 term of index m
    n0 = 2
    w0 = const * math.prod(n0 + g for g in num) / math.prod(n0 + h for h in den)
    first = w0 * _step_ratio(params, 0)
    upper = list(params.upper) + [g + 2.0 for g in num] + [h + 1.0 for h in den]
    lower = list(params.lower) + [1.0] + [g + 1.0 for g in num] + [h + 2.0 for h in den]
    return ratio_series_sum(first, 1, upper, lower, cfg)
