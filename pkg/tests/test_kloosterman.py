from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import kloosterman as K


def test_dedekind_examples():
    assert K.dedekind_sum(1, 2) == 0
    assert K.dedekind_sum(1, 3) == Fraction(1, 18)
    assert K.dedekind_sum(2, 5) == 0 and K.dedekind_sum(5, 2) == 0


def test_reciprocity_exhaustive_to_500():
    for c in range(2, 501):
        for h in range(1, c):
            if math.gcd(h, c) != 1:
                continue
            lhs = K.dedekind_sum(h, c) + K.dedekind_sum(c, h)
            assert lhs == Fraction(-1, 4) + (Fraction(h, c) + Fraction(c, h) + Fraction(1, h * c)) / 12


coprime = st.tuples(st.integers(1, 10 ** 6), st.integers(2, 10 ** 6)).filter(lambda t: math.gcd(*t) == 1)


@given(coprime)
def test_reciprocity_property(hc):
    h, c = hc
    assert K.dedekind_sum(h, c) + K.dedekind_sum(c, h) == Fraction(-1, 4) + (Fraction(h, c) + Fraction(c, h) + Fraction(1, h * c)) / 12


@given(coprime)
def test_odd_symmetry_and_denominator(hc):
    h, c = hc
    s = K.dedekind_sum(h, c)
    assert K.dedekind_sum(-h, c) == -s
    assert (6 * c) % s.denominator == 0


@given(st.tuples(st.integers(1, 60), st.integers(2, 60)).filter(lambda t: math.gcd(*t) == 1))
def test_fast_sum_matches_bruteforce(hc):
    assert K.dedekind_sum(*hc) == K.dedekind_sum_bruteforce(*hc)


def test_multiplier_examples():
    assert K.eta_multiplier((1, 1, 0, 1)).k == 1
    assert K.eta_multiplier((0, -1, 1, 0)).k == (-3) % 24
    assert K.eta_multiplier((0, 1, -1, 0)) == K.eta_multiplier((0, -1, 1, 0))


def _random_sl2(rng: random.Random, cmax: int) -> tuple[int, int, int, int]:
    # d in [-c, 0] keeps Im(gamma z) >= 1/c^2 at z = (1+i)/2, where 200 q-terms converge
    while True:
        c = rng.randint(1, cmax)
        d = rng.randint(-c, 0)
        if math.gcd(c, d) == 1:
            break
    # a d - b c = 1
    a = pow(d, -1, c) if c > 1 else 0
    b = (a * d - 1) // c
    shift = rng.randint(-3, 3)
    return a + shift * c, b + shift * d, c, d


def _eta_residual(g, z) -> float:
    a, b, c, d = g
    with mpmath.workprec(80):
        gz = (a * z + b) / (c * z + d)
        lhs = K.eta_qseries(gz)
        rhs = K.eta_multiplier(g).value(80) * mpmath.sqrt(c * z + d) * K.eta_qseries(z)
        return float(abs(lhs - rhs))


def test_eta_transformation_100_random():
    rng = random.Random(2024)
    z = mpmath.mpc(0.5, 0.5)
    worst = max(_eta_residual(_random_sl2(rng, 50), z) for _ in range(100))
    assert worst < 1e-9


@given(st.integers(1, 50), st.integers(-150, 150), st.integers(-2, 2))
def test_multiplier_is_root_of_unity_and_cocycle_with_T(c, d, shift):
    if math.gcd(c, d) != 1:
        return
    a = pow(d, -1, c) if c > 1 else 0
    b = (a * d - 1) // c
    g = (a + shift * c, b + shift * d, c, d)
    m = K.eta_multiplier(g)
    assert abs(abs(complex(m)) - 1) < 1e-15
    # gamma T: multiplier picks up e(1/24) from T = [[1, 1], [0, 1]]
    gT = (g[0], g[0] + g[1], g[2], g[2] + g[3])
    assert K.eta_multiplier(gT) == m * K.Root24(1)


def test_A_examples():
    for n in range(-10, 30):
        assert K.rademacher_A(1, n, 64).contains(1)
        assert K.selberg_whiteman_A(1, n, 64).contains(1)
    assert K.rademacher_A(2, 1, 64).contains(-1)
    assert K.selberg_whiteman_A(2, 1, 64).contains(-1)
    assert len(K.admissible_matrices(1)) == 1


def test_S_at_c1():
    s = K.kloosterman_S(1, 0, 1)
    sqrt_minus_i = cmath.exp(-0.25j * math.pi)
    assert abs(sqrt_minus_i * s.mid_complex() - 1) < 1e-15


@given(st.integers(1, 200), st.integers(-50, 50))
def test_three_routes_agree(c, n):
    d = K.rademacher_A(c, n, 64)
    z = K.dedekind_form_A(c, n, 64)
    s = K.selberg_whiteman_A(c, n, 64)
    assert abs(d.mid_float() - s.mid_float()) < 1e-9
    assert abs(z.mid_complex() - d.mid_float()) < 1e-9
    assert abs(z.im.mid_float()) < 1e-9
    assert abs(d.mid_float()) <= c


@given(st.integers(1, 60), st.integers(-20, 20), st.integers(-20, 20))
def test_S_conjugation_symmetry(c, m, n):
    # replacing e(x) by e(-x) term by term maps the histogram N -> -N
    h = K.kloosterman_histogram(m, n, c)
    s = K.kloosterman_S(m, n, c).mid_complex()
    mirrored = h[(-np.arange(24 * c)) % (24 * c)]
    conj = sum(int(cnt) * cmath.exp(2j * math.pi * N / (24 * c)) for N, cnt in enumerate(mirrored) if cnt)
    assert abs(conj - s.conjugate()) < 1e-9
    assert abs(s) <= c + 1e-9


def test_partial_sum_examples():
    r = K.kloosterman_partial_sum(5, 1)
    assert abs(r.total.mid_complex() - K.kloosterman_S(1, 5, 1).mid_complex()) < 1e-15
    r = K.kloosterman_partial_sum(3, 400)
    X = 200
    assert r.cumulative[2 * X - 1] - r.cumulative[X - 1] == pytest.approx(r.block(X, 2 * X), abs=1e-12)
    assert np.all(np.diff(r.prefix_radii()) > 0)


def test_partial_sum_growth_fit():
    r = K.kloosterman_partial_sum(1, 10_000)
    C = K.growth_fit(r)
    assert 0 < C < 10
    X = np.arange(10, 10_001)
    assert np.all(np.abs(r.cumulative[9:]) <= C * np.sqrt(X) * np.log(X) * (1 + 1e-12))


def test_partial_sum_rejects_empty():
    with pytest.raises(ValueError):
        K.kloosterman_partial_sum(1, 0)
