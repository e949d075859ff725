"""Membership certificates for the operator image.

Each theorem gives a closed-form left-hand side built from the Gamma
prefactor and Gauss functions at -1; if it does not exceed the right-hand
side, the weighted coefficient sum of the image stays inside its budget and
membership follows.  A :class:`Certificate` records the evaluation and,
after :func:`cross_validate`, the brute-force weighted sum as a check.

Notation below: a, b stand for |a|, |b|; P is the Gamma prefactor;
Y_k = shifted_term(a, b, c, k) so that P*Y_k is the k-th falling-factorial sum;
G = 2F1(a-1, b-2; c-a-1; -1); Q = (c-a-1)(c-a-b)/((a-1)(b-1)(b-2));
R = (c-1)(c-2)/((a-1)(b-1)(b-2)).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace

from .errors import DomainError, UnsupportedTheoremError
from .lemma import shifted_term
from .operator import (
    ClassKind,
    ClassSpec,
    OperatorParams,
    SourceKind,
    SourceSpec,
    class_budget,
    worst_case_T,
)
from .series import DEFAULT_CONFIG, EvalConfig, SeriesValue
from .specfun import gamma_prefactor, gauss_2f1_at_minus_one

__all__ = [
    "TheoremId",
    "Verdict",
    "Precondition",
    "Certificate",
    "parse_theorem",
    "theorem_preconditions",
    "evaluate",
    "check_direct",
    "check_from_R_beta",
    "check_from_S",
    "cross_validate",
    "ORACLE_SLACK",
    "INCONCLUSIVE_REL",
]

ORACLE_SLACK = 1e-8
INCONCLUSIVE_REL = 1e-10


class TheoremId(enum.Enum):
    T2_1 = "T2.1"
    T2_2 = "T2.2"
    COR2 = "COR2"
    T2_3 = "T2.3"
    T3_1 = "T3.1"
    T3_2 = "T3.2"
    T3_3 = "T3.3"
    T4_1 = "T4.1"
    T4_2 = "T4.2"
    T5_1 = "T5.1"
    T5_2 = "T5.2"
    T5_3 = "T5.3"

    @property
    def uses_lambda(self) -> bool:
        return self in _LAMBDA_THEOREMS

    @property
    def uses_beta(self) -> bool:
        return _SOURCE[self] is SourceKind.R_BETA


class Verdict(enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    PRECONDITION_VIOLATED = "PreconditionViolated"
    INCONCLUSIVE = "Inconclusive"


_CLASS = {
    TheoremId.T2_1: ClassKind.STARLIKE_LAMBDA,
    TheoremId.T2_2: ClassKind.STARLIKE_LAMBDA,
    TheoremId.COR2: ClassKind.STARLIKE_LAMBDA,
    TheoremId.T2_3: ClassKind.STARLIKE_LAMBDA,
    TheoremId.T3_1: ClassKind.CONVEX_LAMBDA,
    TheoremId.T3_2: ClassKind.CONVEX_LAMBDA,
    TheoremId.T3_3: ClassKind.CONVEX_LAMBDA,
    TheoremId.T4_1: ClassKind.UCV,
    TheoremId.T4_2: ClassKind.UCV,
    TheoremId.T5_1: ClassKind.SP,
    TheoremId.T5_2: ClassKind.SP,
    TheoremId.T5_3: ClassKind.SP,
}
_SOURCE = {
    TheoremId.T2_1: SourceKind.SELF,
    TheoremId.T3_1: SourceKind.SELF,
    TheoremId.T4_1: SourceKind.SELF,
    TheoremId.T5_1: SourceKind.SELF,
    TheoremId.T2_2: SourceKind.R_BETA,
    TheoremId.COR2: SourceKind.R_BETA,
    TheoremId.T3_2: SourceKind.R_BETA,
    TheoremId.T4_2: SourceKind.R_BETA,
    TheoremId.T5_2: SourceKind.R_BETA,
    TheoremId.T2_3: SourceKind.FULL_S,
    TheoremId.T3_3: SourceKind.FULL_S,
    TheoremId.T5_3: SourceKind.FULL_S,
}
_LAMBDA_THEOREMS = {
    TheoremId.T2_1,
    TheoremId.T2_2,
    TheoremId.T2_3,
    TheoremId.T3_1,
    TheoremId.T3_2,
    TheoremId.T3_3,
}
# extra margin k in "c > |a| + |b| + k"
_EXCESS = {
    TheoremId.T2_1: 1,
    TheoremId.COR2: 0,
    TheoremId.T2_3: 2,
    TheoremId.T3_1: 2,
    TheoremId.T3_2: 1,
    TheoremId.T3_3: 3,
    TheoremId.T4_1: 2,
    TheoremId.T4_2: 1,
    TheoremId.T5_1: 1,
    TheoremId.T5_3: 2,
}

_ALIASES = {"COR": TheoremId.COR2, "COROLLARY": TheoremId.COR2, "COR2.1": TheoremId.COR2}


def parse_theorem(text: str | TheoremId) -> TheoremId:
    """Accept 'T2.1', 't2_1', '2.1', 'COR2' and the like."""
    if isinstance(text, TheoremId):
        return text
    key = str(text).strip().upper().replace("_", ".")
    if key in _ALIASES:
        return _ALIASES[key]
    if key and key[0].isdigit():
        key = "T" + key
    for t in TheoremId:
        if t.value == key:
            return t
    raise ValueError(f"unknown theorem id {text!r}")


@dataclass(frozen=True)
class Precondition:
    name: str
    required: str
    margin: float
    passed: bool

    def as_dict(self) -> dict:
        return {"name": self.name, "required": self.required, "margin": self.margin, "passed": self.passed}


def _strict(name: str, required: str, margin: float, delta: float) -> Precondition:
    return Precondition(name, required, margin, bool(margin > delta))


def theorem_preconditions(
    theorem: TheoremId, params: OperatorParams, cfg: EvalConfig = DEFAULT_CONFIG
) -> list[Precondition]:
    """Parameter hypotheses of the theorem with their margins.

    Strict inequalities pass only with margin above ``cfg.margin``.
    """
    a, b, c = params.a_mod, params.b_mod, params.c
    d = cfg.margin
    out = [_strict("c_positive", "c > 0", c, d)]
    if theorem in (TheoremId.T2_2, TheoremId.T5_2):
        out += [
            _strict("a_not_one", "|a| != 1", abs(a - 1.0), d),
            _strict("b_not_one", "|b| != 1", abs(b - 1.0), d),
            _strict("b_not_two", "|b| != 2", abs(b - 2.0), d),
            _strict(
                "c_lower",
                "c > max{|a|+1, |a|+|b|-1}",
                c - max(a + 1.0, a + b - 1.0),
                d,
            ),
            # the summation formula behind the statement needs a convergent 3F2 at 1
            _strict("series_convergence", "c > |a|+|b|", c - a - b, d),
        ]
    else:
        k = _EXCESS[theorem]
        req = "c > |a|+|b|" + (f"+{k}" if k else "")
        out.append(_strict("c_excess", req, c - a - b - k, d))
    return out


@dataclass(frozen=True)
class Certificate:
    """One theorem evaluated at one parameter point."""

    theorem: TheoremId
    params: OperatorParams
    lam: float | None
    beta: float | None
    preconditions: tuple[Precondition, ...]
    lhs: float | None
    rhs: float | None
    margin: float | None
    verdict: Verdict
    oracle_T: SeriesValue | None = None
    oracle_ok: bool | None = None
    alternatives: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    @property
    def budget(self) -> float:
        return class_budget(_class_spec(self.theorem, self.lam))

    def record(self) -> dict:
        """Flat record with the scan field names."""
        return {
            "theorem": self.theorem.value,
            "a": self.params.a_mod,
            "b": self.params.b_mod,
            "c": self.params.c,
            "lambda": self.lam,
            "beta": self.beta,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict.value,
            "oracle_T": None if self.oracle_T is None else self.oracle_T.value,
        }

    def to_dict(self) -> dict:
        out = self.record()
        out["preconditions"] = [p.as_dict() for p in self.preconditions]
        if self.oracle_T is not None:
            out["oracle"] = {
                "value": self.oracle_T.value,
                "tail_bound": self.oracle_T.tail_bound,
                "converged": self.oracle_T.converged,
                "budget": self.budget,
                "within_budget": self.oracle_ok,
            }
        if self.alternatives:
            out["alternatives"] = dict(self.alternatives)
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _class_spec(theorem: TheoremId, lam: float | None) -> ClassSpec:
    kind = _CLASS[theorem]
    if kind in (ClassKind.STARLIKE_LAMBDA, ClassKind.CONVEX_LAMBDA):
        return ClassSpec(kind, lam)
    return ClassSpec(kind)


def _source_spec(theorem: TheoremId, beta: float | None) -> SourceSpec:
    kind = _SOURCE[theorem]
    return SourceSpec(kind, beta) if kind is SourceKind.R_BETA else SourceSpec(kind)


class _Pieces:
    """Lazily evaluated building blocks shared by the theorem formulas."""

    def __init__(self, params: OperatorParams, cfg: EvalConfig):
        self.a, self.b, self.c = params.a_mod, params.b_mod, params.c
        self.cfg = cfg
        self._y: dict[int, float] = {}
        self.P = gamma_prefactor(self.a, self.b, self.c, cfg)

    def Y(self, k: int) -> float:
        if k not in self._y:
            self._y[k] = shifted_term(self.a, self.b, self.c, k, self.cfg)
        return self._y[k]

    @property
    def denom(self) -> float:
        return (self.a - 1.0) * (self.b - 1.0) * (self.b - 2.0)

    @property
    def QG(self) -> float:
        a, b, c = self.a, self.b, self.c
        g = gauss_2f1_at_minus_one(a - 1.0, b - 2.0, c - a - 1.0, self.cfg).value
        return (c - a - 1.0) * (c - a - b) / self.denom * g

    @property
    def R(self) -> float:
        return (self.c - 1.0) * (self.c - 2.0) / self.denom


def _half_inverse(beta: float) -> float:
    return 1.0 / (2.0 * (1.0 - beta))


def _lhs_rhs(theorem: TheoremId, pc: _Pieces, lam: float | None, beta: float | None):
    """(lhs, rhs, alternatives) exactly as the theorem statements display them."""
    P, Y = pc.P, pc.Y
    T = TheoremId
    alt: dict[str, float] = {}
    if theorem is T.T2_1:
        return P * (Y(1) + lam * Y(0)), 2.0 * lam, alt
    if theorem is T.T2_2:
        lhs = P * ((lam - 1.0) * pc.QG + Y(0))
        rhs = lam * (1.0 + _half_inverse(beta)) + (lam - 1.0) * pc.R
        return lhs, rhs, alt
    if theorem is T.COR2:
        return P * Y(0), 1.0 + _half_inverse(beta), alt
    if theorem in (T.T2_3, T.T3_1):
        return P * math.fsum([Y(2), (lam + 2.0) * Y(1), lam * Y(0)]), 2.0 * lam, alt
    if theorem is T.T3_2:
        return P * (Y(1) + lam * Y(0)), lam * (_half_inverse(beta) + 1.0), alt
    if theorem is T.T3_3:
        lhs = P * math.fsum([Y(3), (lam + 5.0) * Y(2), (3.0 * lam + 4.0) * Y(1), lam * Y(0)])
        return lhs, 2.0 * lam, alt
    if theorem in (T.T4_1, T.T5_3):
        return P * math.fsum([2.0 * Y(2), 5.0 * Y(1), Y(0)]), 2.0, alt
    if theorem is T.T4_2:
        return P * (2.0 * Y(1) + Y(0)), _half_inverse(beta) + 1.0, alt
    if theorem is T.T5_1:
        return P * (2.0 * Y(1) + Y(0)), 2.0, alt
    if theorem is T.T5_2:
        qg, r = pc.QG, pc.R
        lhs = P * (2.0 * Y(0) + qg) + r
        alt["lhs_proof_sign"] = P * (2.0 * Y(0) - qg) + r
        return lhs, _half_inverse(beta) + 1.0, alt
    raise AssertionError(theorem)


def evaluate(
    theorem: TheoremId | str,
    params: OperatorParams,
    lam: float | None = None,
    beta: float | None = None,
    cfg: EvalConfig = DEFAULT_CONFIG,
) -> Certificate:
    """Evaluate one theorem's sufficient condition at ``params``.

    ``lam`` is required by the S*_lambda / C_lambda theorems (forced to 1 for
    the corollary) and ``beta`` by the R(beta) theorems.  Nothing is summed
    unless every precondition holds with margin above ``cfg.margin``.
    """
    theorem = parse_theorem(theorem)
    if theorem is TheoremId.COR2:
        if lam not in (None, 1, 1.0):
            raise DomainError("the corollary is the lambda = 1 case")
        lam = 1.0
    elif theorem.uses_lambda:
        if lam is None:
            raise DomainError(f"{theorem.value} needs lambda")
        ClassSpec(_CLASS[theorem], lam)
    elif lam is not None:
        raise DomainError(f"{theorem.value} takes no lambda")
    if theorem.uses_beta:
        if beta is None:
            raise DomainError(f"{theorem.value} needs beta")
        SourceSpec.r_beta(beta)
    elif beta is not None:
        raise DomainError(f"{theorem.value} takes no beta")

    pre = tuple(theorem_preconditions(theorem, params, cfg))
    if not all(p.passed for p in pre):
        return Certificate(theorem, params, lam, beta, pre, None, None, None, Verdict.PRECONDITION_VIOLATED)

    pieces = _Pieces(params, cfg)
    lhs, rhs, alt = _lhs_rhs(theorem, pieces, lam, beta)
    notes: list[str] = []
    if not (math.isfinite(lhs) and not math.isnan(rhs)):
        notes.append("non-finite left-hand side")
        return Certificate(theorem, params, lam, beta, pre, lhs, rhs, None, Verdict.INCONCLUSIVE, alternatives=alt, notes=tuple(notes))
    margin = rhs - lhs
    band = INCONCLUSIVE_REL * max(1.0, abs(rhs)) if math.isfinite(rhs) else 0.0
    if abs(margin) <= band:
        verdict = Verdict.INCONCLUSIVE
        notes.append(f"|margin| within resolution band {band:.3g}")
    elif margin > 0:
        verdict = Verdict.HOLDS
    else:
        verdict = Verdict.FAILS
    return Certificate(theorem, params, lam, beta, pre, lhs, rhs, margin, verdict, alternatives=alt, notes=tuple(notes))


_DIRECT = {
    ClassKind.STARLIKE_LAMBDA: TheoremId.T2_1,
    ClassKind.CONVEX_LAMBDA: TheoremId.T3_1,
    ClassKind.UCV: TheoremId.T4_1,
    ClassKind.SP: TheoremId.T5_1,
}
_FROM_R = {
    ClassKind.STARLIKE_LAMBDA: TheoremId.T2_2,
    ClassKind.CONVEX_LAMBDA: TheoremId.T3_2,
    ClassKind.UCV: TheoremId.T4_2,
    ClassKind.SP: TheoremId.T5_2,
}
_FROM_S = {
    ClassKind.STARLIKE_LAMBDA: TheoremId.T2_3,
    ClassKind.CONVEX_LAMBDA: TheoremId.T3_3,
    ClassKind.SP: TheoremId.T5_3,
}


def check_direct(cls: ClassSpec, params: OperatorParams, cfg: EvalConfig = DEFAULT_CONFIG) -> Certificate:
    """Is z 3F2(a, b/2, (b+1)/2; c/2, (c+1)/2; z) itself in the class?"""
    return evaluate(_DIRECT[cls.kind], params, cls.lam, None, cfg)


def check_from_R_beta(
    cls: ClassSpec,
    beta: float,
    params: OperatorParams,
    cfg: EvalConfig = DEFAULT_CONFIG,
    corollary: bool = False,
) -> Certificate:
    """Does the operator map R(beta) into the class?

    ``corollary=True`` selects the lambda = 1 corollary for S*_lambda.
    """
    if not 0 <= beta < 1:
        raise DomainError(f"beta must lie in [0, 1), got {beta!r}")
    if corollary:
        if cls.kind is not ClassKind.STARLIKE_LAMBDA:
            raise UnsupportedTheoremError("the corollary concerns S*_1 only")
        return evaluate(TheoremId.COR2, params, 1.0, beta, cfg)
    return evaluate(_FROM_R[cls.kind], params, cls.lam, beta, cfg)


def check_from_S(cls: ClassSpec, params: OperatorParams, cfg: EvalConfig = DEFAULT_CONFIG) -> Certificate:
    """Does the operator map the univalent class S into the class?"""
    if cls.kind not in _FROM_S:
        raise UnsupportedTheoremError("no sufficient condition is available for S -> UCV")
    return evaluate(_FROM_S[cls.kind], params, cls.lam, None, cfg)


def cross_validate(cert: Certificate, cfg: EvalConfig = DEFAULT_CONFIG) -> Certificate:
    """Attach the brute-force weighted coefficient sum to a decided certificate.

    For a Holds verdict the sum must not exceed the class budget by more than
    ``ORACLE_SLACK``; a breach is recorded in ``oracle_ok`` and ``notes``.
    Certificates without a Holds/Fails verdict are returned unchanged.
    """
    if cert.verdict not in (Verdict.HOLDS, Verdict.FAILS):
        return cert
    cls = _class_spec(cert.theorem, cert.lam)
    src = _source_spec(cert.theorem, cert.beta)
    notes = list(cert.notes)
    try:
        oracle = worst_case_T(cls, src, cert.params, cfg)
    except DomainError as exc:
        notes.append(f"oracle unavailable: {exc}")
        return replace(cert, verdict=Verdict.INCONCLUSIVE, notes=tuple(notes))
    if not oracle.converged:
        notes.append(
            f"oracle not converged: value {oracle.value!r}, tail bound {oracle.tail_bound!r}, "
            f"{oracle.terms_used} terms"
        )
        return replace(cert, oracle_T=oracle, verdict=Verdict.INCONCLUSIVE, notes=tuple(notes))
    ok = None
    if cert.verdict is Verdict.HOLDS:
        budget = class_budget(cls)
        ok = oracle.value <= budget + ORACLE_SLACK
        if not ok:
            notes.append(
                f"soundness violation: weighted sum {oracle.value!r} exceeds budget {budget!r}"
            )
            alt = cert.alternatives.get("lhs_proof_sign")
            if alt is not None:
                holds_alt = alt <= cert.rhs
                notes.append(
                    f"proof-sign left-hand side {alt!r} "
                    + ("also certifies" if holds_alt else "does not certify")
                )
    return replace(cert, oracle_T=oracle, oracle_ok=ok, notes=tuple(notes))
