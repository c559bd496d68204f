from __future__ import annotations

from fractions import Fraction

import mpmath
from hypothesis import given, strategies as st

from artifact import balls as B
from artifact.balls import BallComplex, BallReal

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10 ** 6)
nonzero = rationals.filter(lambda x: abs(x) > Fraction(1, 1000))


def _exact(x: Fraction) -> mpmath.mpf:
    with mpmath.workprec(400):
        return mpmath.mpf(x.numerator) / x.denominator


@given(rationals, rationals)
def test_add_mul_enclose_exact(x, y):
    bx, by = BallReal.exact(x, 64), BallReal.exact(y, 64)
    assert (bx + by).contains(x + y)
    assert (bx - by).contains(x - y)
    assert (bx * by).contains(x * y)


@given(rationals, nonzero)
def test_div_encloses_exact(x, y):
    assert (BallReal.exact(x, 64) / BallReal.exact(y, 64)).contains(x / y)


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10 ** 4))
def test_elementary_functions_enclose(x):
    b = BallReal.exact(x, 80)
    with mpmath.workprec(300):
        v = _exact(x)
        assert B.sqrt(b).contains(mpmath.sqrt(v))
        assert B.log(b).contains(mpmath.log(v))
        if x < 50:
            assert B.exp(b).contains(mpmath.exp(v))


@given(st.fractions(min_value=-50, max_value=50, max_denominator=500))
def test_cos_sin_pi_enclose(x):
    c, s = B.cos_sin_pi(x, 72)
    with mpmath.workprec(300):
        v = _exact(x)
        assert c.contains(mpmath.cospi(v)) and s.contains(mpmath.sinpi(v))


@given(rationals)
def test_higher_precision_midpoint_inside(x):
    lo = B.sqrt(BallReal.exact(abs(x) + 1, 64))
    hi = B.sqrt(BallReal.exact(abs(x) + 1, 128))
    assert lo.contains(hi.mid_mpf)
    assert hi.rad_float() <= lo.rad_float()


def test_midpoint_keeps_full_precision():
    b = BallReal.pi(200)
    assert b.mid_mpf._mpf_ == b.mid
    z = BallComplex(b, b)
    assert z.mid_mpc().real._mpf_ == b.mid


def test_certified_integer():
    assert BallReal.exact(Fraction(7, 2) + Fraction(1, 10 ** 6), 64).certified_integer() == 4
    assert BallReal.exact(5, 64).add_error(0.6).certified_integer() is None
