from __future__ import annotations

import math

import mpmath as mp
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from clausencert import PoleProximityError, driver_johnston_rhs, lemma4_closed_forms, lemma_sum_brute, lemma_sum_closed
from clausencert.lemma import falling_weighted_sum, lemma_margins

mp.mp.dps = 20


def rel(x, y):
    return abs(x - y) / abs(y)


def test_anchor_part1():
    assert lemma_sum_closed(1, 1, 1, 4) == pytest.approx(1.5, abs=1e-12)
    assert lemma_sum_brute(1, 1, 1, 4).value == pytest.approx(1.5, abs=1e-12)


def test_driver_johnston_anchor():
    assert driver_johnston_rhs(1, 1, 4) == pytest.approx(6 * math.log(2) - 3, abs=1e-13)


def _mp_weighted(part, a, b, c):
    # (n+1) = (2)_n / (1)_n and 1/(n+1) = (1)_n / (2)_n turn each weight into a parameter pair
    # (hyper supplies the 1/n! itself)
    upper = [a, mp.mpf(b) / 2, (mp.mpf(b) + 1) / 2]
    lower = [mp.mpf(c) / 2, (mp.mpf(c) + 1) / 2]
    if part == 4:
        return float(mp.hyper(upper + [1], lower + [2], 1))
    return float(mp.hyper(upper + [2] * part, lower + [1] * part, 1))


@pytest.mark.parametrize("part", [1, 2, 3, 4])
def test_against_mpmath(part):
    a, b = 0.6, 1.4
    c = a + b + (part if part < 4 else 1) + 2.7
    assert lemma_sum_brute(part, a, b, c).value == pytest.approx(_mp_weighted(part, a, b, c), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([1, 2, 3]), st.floats(0.05, 3.0), st.floats(0.05, 4.0), st.floats(0.2, 6.0))
def test_closed_matches_brute(part, a, b, excess):
    c = a + b + part + excess
    brute = lemma_sum_brute(part, a, b, c)
    assert brute.converged
    assert rel(lemma_sum_closed(part, a, b, c), brute.value) <= 1e-10


@settings(max_examples=50, deadline=None)
@given(st.floats(0.05, 3.0), st.floats(0.05, 4.0), st.floats(0.2, 6.0))
def test_part4_closed_matches_brute(a, b, excess):
    assume(abs(a - 1) > 0.05 and abs(b - 1) > 0.05 and abs(b - 2) > 0.05)
    c = max(a + 1, a + b - 1) + excess
    forms = lemma4_closed_forms(a, b, c)
    brute = lemma_sum_brute(4, a, b, c)
    assert rel(forms["statement"], brute.value) <= 1e-9
    # the two printed forms differ only in how (b-2)(b-1) is written, so they
    # agree up to rounding of the subtracted rational term
    r = (c - 1) * (c - 2) / ((a - 1) * (b - 1) * (b - 2))
    assert abs(forms["statement"] - forms["proof"]) <= 1e-14 * max(1.0, abs(r))


def test_part4_straddles_c_equal_a_plus_b():
    # c between a+b-1 and a+b: the closed form stays finite through Gamma(c-a-b+1)
    a, b = 0.5, 2.6
    for c in (2.7, 3.1, 3.5):
        assert rel(lemma_sum_closed(4, a, b, c), lemma_sum_brute(4, a, b, c).value) <= 1e-9


def test_decomposition_identity():
    a, b, c = 0.7, 1.2, 5.5
    whole = lemma_sum_brute(3, a, b, c).value
    parts = [falling_weighted_sum(k, a, b, c).value for k in range(4)]
    assert rel(parts[3] + 6 * parts[2] + 7 * parts[1] + parts[0], whole) <= 1e-12


@pytest.mark.parametrize(
    "part, abc, factor",
    [
        (1, (1, 1, 3), "c - a - b - 1"),
        (3, (1, 1, 5), "c - a - b - 3"),
        (4, (1, 0.5, 5), "|a - 1|"),
        (4, (0.5, 2, 5), "|b - 2|"),
    ],
)
def test_margins_enforced(part, abc, factor):
    with pytest.raises(PoleProximityError) as info:
        lemma_sum_closed(part, *abc)
    assert info.value.factor == factor
    assert dict(lemma_margins(part, *abc))[factor] <= 1e-9


def test_bad_part():
    with pytest.raises(ValueError):
        lemma_sum_closed(5, 1, 1, 9)
