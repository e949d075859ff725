from __future__ import annotations

import json
import math
import random
import warnings

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from clausencert import (
    ClassSpec,
    DomainError,
    OperatorParams,
    SourceSpec,
    TheoremId,
    UnsupportedTheoremError,
    Verdict,
    check_direct,
    check_from_R_beta,
    check_from_S,
    cross_validate,
    evaluate,
    parse_theorem,
    worst_case_T,
)
from clausencert import certificates as certmod


def test_parse_theorem_forms():
    assert parse_theorem("T2.1") is TheoremId.T2_1
    assert parse_theorem("t3_3") is TheoremId.T3_3
    assert parse_theorem("5.2") is TheoremId.T5_2
    assert parse_theorem("COR2") is TheoremId.COR2
    with pytest.raises(ValueError):
        parse_theorem("T9.9")


def test_direct_starlike_example():
    cert = check_direct(ClassSpec.starlike(1), OperatorParams(1, 1, 4))
    assert cert.verdict is Verdict.HOLDS
    assert cert.lhs == pytest.approx(1.5, abs=1e-12)
    assert cert.rhs == 2.0
    assert cert.margin == pytest.approx(0.5, abs=1e-12)


def test_ucv_boundary_is_precondition_violation():
    cert = check_direct(ClassSpec.ucv(), OperatorParams(1, 1, 4))
    assert cert.verdict is Verdict.PRECONDITION_VIOLATED
    failed = [p for p in cert.preconditions if not p.passed]
    assert [p.required for p in failed] == ["c > |a|+|b|+2"]
    assert cert.lhs is None and cert.margin is None


def test_corollary_rhs():
    cert = check_from_R_beta(ClassSpec.starlike(1), 0.0, OperatorParams(0.5, 0.5, 3), corollary=True)
    assert cert.theorem is TheoremId.COR2
    assert cert.rhs == 1.5


def test_no_summation_when_precondition_fails(monkeypatch):
    def boom(*args, **kwargs):
        raise AssertionError("evaluated despite failing precondition")

    monkeypatch.setattr(certmod, "shifted_term", boom)
    monkeypatch.setattr(certmod, "gamma_prefactor", boom)
    cert = evaluate("T3.3", OperatorParams(1, 1, 5 + 1e-12), 0.5)
    assert cert.verdict is Verdict.PRECONDITION_VIOLATED


def test_margin_delta_is_respected():
    # c - |a| - |b| - 1 = 5e-10 < delta
    cert = evaluate("T2.1", OperatorParams(1, 1, 3 + 5e-10), 1.0)
    assert cert.verdict is Verdict.PRECONDITION_VIOLATED


def test_implicit_convergence_precondition_for_t22_t52():
    # c in (|a|+|b|-1, |a|+|b|]: the printed bounds pass but the series diverges
    p = OperatorParams(0.5, 2.5, 2.8)
    for theorem in ("T2.2", "T5.2"):
        cert = evaluate(theorem, p, 0.7 if theorem == "T2.2" else None, 0.2)
        assert cert.verdict is Verdict.PRECONDITION_VIOLATED
        names = {q.name for q in cert.preconditions if not q.passed}
        assert names == {"series_convergence"}


def test_ucv_from_s_unsupported():
    with pytest.raises(UnsupportedTheoremError):
        check_from_S(ClassSpec.ucv(), OperatorParams(1, 1, 9))


def test_parameter_validation():
    p = OperatorParams(1, 1, 9)
    with pytest.raises(DomainError):
        evaluate("T2.1", p)
    with pytest.raises(DomainError):
        evaluate("T2.1", p, 1.5)
    with pytest.raises(DomainError):
        evaluate("T4.2", p, beta=1.0)
    with pytest.raises(DomainError):
        evaluate("T4.1", p, lam=0.5)
    with pytest.raises(DomainError):
        check_from_R_beta(ClassSpec.sp(), -0.1, p)


def test_dispatch_tables():
    p = OperatorParams(0.5, 0.5, 9)
    assert check_direct(ClassSpec.convex(0.3), p).theorem is TheoremId.T3_1
    assert check_direct(ClassSpec.sp(), p).theorem is TheoremId.T5_1
    assert check_from_R_beta(ClassSpec.ucv(), 0.1, p).theorem is TheoremId.T4_2
    assert check_from_S(ClassSpec.starlike(0.5), p).theorem is TheoremId.T2_3
    assert check_from_S(ClassSpec.sp(), p).theorem is TheoremId.T5_3


# The closed forms of several theorems are exact rewrites of the weighted sum:
# LHS - shift equals the brute-force T (with beta-free sources).
EXACT = {
    "T2.1": (1, lambda lam: lam),
    "T2.3": (2, lambda lam: lam),
    "T3.1": (2, lambda lam: lam),
    "T3.3": (3, lambda lam: lam),
    "T4.1": (2, lambda lam: 1.0),
    "T5.1": (1, lambda lam: 1.0),
    "T5.3": (2, lambda lam: 1.0),
}


@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from(sorted(EXACT)),
    st.floats(0.05, 3.0),
    st.floats(0.05, 4.0),
    st.floats(0.3, 6.0),
    st.floats(0.05, 1.0),
)
def test_closed_form_equals_weighted_sum(name, a, b, excess, lam):
    extra, shift = EXACT[name]
    theorem = parse_theorem(name)
    lam = lam if theorem.uses_lambda else None
    cert = cross_validate(evaluate(theorem, OperatorParams(a, b, a + b + extra + excess), lam))
    assume(cert.oracle_T is not None)
    assert cert.lhs - shift(lam) == pytest.approx(cert.oracle_T.value, rel=1e-9, abs=1e-12)


@settings(max_examples=150, deadline=None)
@given(
    st.sampled_from([t for t in TheoremId if t is not TheoremId.T5_2]),
    st.floats(0.05, 3.0),
    st.floats(0.05, 4.0),
    st.floats(0.01, 6.0),
    st.floats(0.02, 1.0),
    st.floats(0.0, 0.98),
)
def test_holds_implies_weighted_sum_within_budget(theorem, a, b, excess, lam, beta):
    extra = {TheoremId.T2_1: 1, TheoremId.T3_2: 1, TheoremId.T4_2: 1, TheoremId.T5_1: 1, TheoremId.T3_3: 3}
    extra.update(dict.fromkeys((TheoremId.T2_3, TheoremId.T3_1, TheoremId.T4_1, TheoremId.T5_3), 2))
    p = OperatorParams(a, b, a + b + extra.get(theorem, 0) + excess)
    lam = 1.0 if theorem is TheoremId.COR2 else (lam if theorem.uses_lambda else None)
    beta = beta if theorem.uses_beta else None
    cert = cross_validate(evaluate(theorem, p, lam, beta))
    if cert.verdict is Verdict.HOLDS:
        assert cert.oracle_ok, cert.to_json()


def test_t52_printed_sign_counterexample_is_flagged():
    p = OperatorParams(0.7312248230236637, 2.546834978127726, 3.9022762149374755)
    cert = cross_validate(check_from_R_beta(ClassSpec.sp(), 0.21444884310452317, p))
    assert cert.verdict is Verdict.HOLDS
    assert cert.oracle_ok is False
    assert cert.alternatives["lhs_proof_sign"] > cert.rhs
    assert any("proof-sign" in n for n in cert.notes)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 4.0), st.floats(0.05, 6.0), st.floats(0.0, 0.98))
def test_t52_proof_sign_is_sound(a, b, excess, beta):
    p = OperatorParams(a, b, a + b + excess)
    cert = evaluate("T5.2", p, beta=beta)
    assume(cert.verdict is not Verdict.PRECONDITION_VIOLATED)
    if cert.alternatives["lhs_proof_sign"] < cert.rhs:
        t = worst_case_T(ClassSpec.sp(), SourceSpec.r_beta(beta), p).value
        assert t <= 1 + 1e-8


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 4.0), st.floats(1.1, 6.0), st.floats(0.05, 1.0), st.floats(0.05, 1.0))
def test_starlike_margin_grows_with_c_and_verdict_monotone(a, b, excess, d1, d2):
    # here margin = lambda - T exactly and every B_n decreases in c
    lam = 0.8
    p1 = OperatorParams(a, b, a + b + excess)
    p2 = OperatorParams(a, b, a + b + excess + d1 + d2)
    m1 = evaluate("T2.1", p1, lam).margin
    m2 = evaluate("T2.1", p2, lam).margin
    assert m2 >= m1 - 1e-12


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 4.0), st.floats(0.3, 6.0), st.floats(0.0, 0.97), st.floats(0.0, 0.97))
def test_beta_monotone(a, b, excess, b1, b2):
    p = OperatorParams(a, b, a + b + 1 + excess)
    lo, hi = sorted((b1, b2))
    # a larger beta shrinks R(beta), so it can only help
    assert evaluate("T4.2", p, beta=hi).margin >= evaluate("T4.2", p, beta=lo).margin


def test_record_and_json_round_trip():
    cert = cross_validate(evaluate("T3.2", OperatorParams(0.3, 0.4, 4.0), 0.5, 0.25))
    rec = cert.record()
    assert list(rec) == ["theorem", "a", "b", "c", "lambda", "beta", "lhs", "rhs", "margin", "verdict", "oracle_T"]
    data = json.loads(cert.to_json())
    assert data["lhs"] == cert.lhs
    assert data["verdict"] == cert.verdict.value
    assert data["oracle"]["within_budget"] == cert.oracle_ok


def test_cross_validate_leaves_undecided_alone():
    cert = evaluate("T4.1", OperatorParams(1, 1, 4))
    assert cross_validate(cert) is cert


def test_inconclusive_band():
    # bisect c until the T2.1 margin at a = b = 1 sits inside the resolution band
    lo, hi = 3.5, 4.0
    f = lambda c: evaluate("T2.1", OperatorParams(1, 1, c), 1.0).margin  # noqa: E731
    while hi - lo > 4 * math.ulp(hi):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) < 0 else (lo, mid)
    cert = evaluate("T2.1", OperatorParams(1, 1, hi), 1.0)
    assert cert.verdict is Verdict.INCONCLUSIVE
    assert abs(cert.margin) <= 1e-10 * max(1, abs(cert.rhs))


def test_small_a_limit():
    cert = evaluate("T2.1", OperatorParams(1e-12, 1, 4), 1.0)
    assert cert.lhs == pytest.approx(1.0, abs=1e-10)
    assert cert.verdict is Verdict.HOLDS


def test_beta_near_one_holds():
    cert = check_from_R_beta(ClassSpec.ucv(), 1 - 1e-15, OperatorParams(0.3, 0.3, 2.0))
    assert cert.rhs > 1e14 and cert.verdict is Verdict.HOLDS


def test_small_lambda_fails_from_s():
    cert = check_from_S(ClassSpec.starlike(1e-9), OperatorParams(0.5, 0.5, 4))
    assert cert.verdict is Verdict.FAILS


def test_convex_from_s_example():
    cert = cross_validate(check_from_S(ClassSpec.convex(1.0), OperatorParams(0.25, 0.25, 5)))
    assert all(p.passed for p in cert.preconditions)
    assert cert.verdict in (Verdict.HOLDS, Verdict.FAILS)
    assert cert.lhs - 1.0 == pytest.approx(cert.oracle_T.value, rel=1e-10)


def test_sp_boundary():
    assert check_from_S(ClassSpec.sp(), OperatorParams(1, 1, 4)).verdict is Verdict.PRECONDITION_VIOLATED


def test_margin_monotone_in_c_on_most_rays():
    # not a theorem; rays where the margin dips after the first Holds are only reported
    rng = random.Random(3)
    bad = []
    total = 0
    for theorem in TheoremId:
        for _ in range(10):
            a, b = rng.uniform(0.1, 2.5), rng.uniform(0.1, 3.5)
            if theorem in (TheoremId.T2_2, TheoremId.T5_2) and min(abs(a - 1), abs(b - 1), abs(b - 2)) < 0.05:
                continue
            lam = rng.uniform(0.1, 1.0) if theorem.uses_lambda else (1.0 if theorem is TheoremId.COR2 else None)
            beta = rng.uniform(0, 0.9) if theorem.uses_beta else None
            margins = []
            for k in range(25):
                cert = evaluate(theorem, OperatorParams(a, b, a + b + 0.1 + 0.4 * k), lam, beta)
                if cert.margin is not None:
                    margins.append((cert.verdict, cert.margin))
            holds_from = next((i for i, (v, _) in enumerate(margins) if v is Verdict.HOLDS), None)
            total += 1
            if holds_from is not None:
                tail = [m for _, m in margins[holds_from:]]
                if any(y < x - 1e-12 for x, y in zip(tail, tail[1:])):
                    bad.append((theorem.value, a, b, lam, beta))
    rate = 1 - len(bad) / total
    if rate < 0.95:
        warnings.warn(f"margin monotone on {rate:.0%} of rays; non-monotone: {bad}")
    print(f"margin monotone after first Holds on {rate:.1%} of {total} rays")
