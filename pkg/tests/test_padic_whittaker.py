from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.padic import whittaker as W

unit = st.floats(0, 2 * math.pi).map(lambda t: cmath.exp(1j * t))
primes = st.sampled_from([2, 3, 5, 7])
svals = st.tuples(st.floats(0, 0.45), st.floats(-3, 3)).map(lambda t: complex(*t))


def test_examples():
    assert W.spherical_whittaker((0.3, 0.9), -1, 3) == 0
    assert W.A_ratio(0, 0.3, 3) == pytest.approx(1)
    assert W.complete_homogeneous(2, 3, 2) == 4 + 6 + 9
    assert W.complete_homogeneous(2, 2, 3) == 4 * 8


def test_certified_series_rejects_divergent():
    with pytest.raises(ValueError):
        W.certified_series(lambda j: 1.0, 1.0, 0, 1.0)
    r = W.certified_series(lambda j: 0.5 ** j, 0.5, 0, 1.0)
    assert abs(r.value - 2) <= r.tail_bound + 1e-15


@settings(max_examples=1000)
@given(unit, unit, primes, st.integers(0, 15))
def test_macdonald_and_degenerate(a, b, q, k):
    w = W.spherical_whittaker((a, b), k, q)
    direct = q ** (-k / 2) * sum(a ** i * b ** (k - i) for i in range(k + 1))
    assert abs(w - direct) < 1e-12
    assert abs(W.spherical_whittaker((a, a), k, q) - W.spherical_whittaker_degenerate(a, k, q)) < 1e-12


@settings(max_examples=1000)
@given(unit, unit, primes, st.integers(1, 6))
def test_pairing_closed_forms(alpha, alpha1, q, n):
    r = W.ramified_pairing_sum(alpha, q, n)
    assert abs(r.value - W.ramified_pairing_closed(alpha, q, n)) + r.tail_bound < 1e-10
    u = W.unramified_pairing_sum(alpha, alpha1, q, n)
    assert abs(u.value - W.unramified_pairing_closed(alpha, alpha1, q, n)) + u.tail_bound < 1e-10


@settings(max_examples=1000)
@given(svals, primes, st.integers(0, 6), unit)
def test_translated_pairing_and_ratios(s, q, l, a):
    r = W.translated_self_pairing_sum(l, s, q)
    assert abs(r.value - W.translated_self_pairing_closed(l, s, q)) + r.tail_bound < 1e-10
    if l >= 1:
        assert abs(W.plain_ratio_sum(l, s, q) - W.A_ratio(l, s, q)) < 1e-10
        assert abs(W.twisted_ratio_sum(l, s, q, a) - W.A_twisted_ratio(l, s, q, a)) < 1e-10
        assert abs(W.character_ratio_sum(l, s, q, a) - W.A_character_ratio(l, s, q, a)) < 1e-10


def test_variant_twisted_ratio_only_for_l1():
    q, s, a = 3, 0.2 + 0.5j, cmath.exp(0.7j)
    assert abs(W.twisted_ratio_sum(1, s, q, a) - W.A_twisted_ratio(1, s, q, a, variant=True)) < 1e-10
    assert abs(W.twisted_ratio_sum(2, s, q, a) - W.A_twisted_ratio(2, s, q, a, variant=True)) > 1e-6


def test_unramified_pairing_needs_positive_n():
    with pytest.raises(ValueError):
        W.unramified_pairing_sum(1.0, 1.0, 3, 0)


def test_steinberg_newvector_normalized():
    for q in (2, 3, 5):
        for chi in (1.0, -1.0):
            Wst = W.steinberg_newvector(chi, q)
            r = W.kirillov_inner(Wst, Wst, 0, 1 / q, scale=4.0)
            assert abs(r.value - 1) < 1e-10
