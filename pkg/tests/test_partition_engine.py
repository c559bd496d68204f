from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact import partition_engine as P
from artifact.balls import BallReal


def test_oracle_small_values():
    assert [P.partition_oracle(n) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    assert P.partition_oracle(100) == 190569292
    assert P.partition_oracle(200) == 3972999029388


def test_oracle_matches_enumeration_up_to_60():
    for n in range(61):
        assert P.partition_oracle(n) == P.partition_bruteforce(n)


def test_oracle_rejects_bad_input():
    with pytest.raises(ValueError):
        P.partition_oracle(-1)
    with pytest.raises(P.OracleCapacityError):
        P.partition_oracle(P.MAX_ORACLE_N + 1)


def test_first_term_has_unit_kloosterman_factor():
    t = P.hrr_term(1, 1, 128)
    assert t.a_c.contains(1) and t.a_c.rad_float() < 1e-30
    # the c = 1 term dominates p(1) = 1
    assert abs(t.term.mid_float() - 1) < 0.2


@pytest.mark.parametrize("n", [1, 7, 50, 333])
def test_first_term_a_is_one_for_any_n(n):
    assert P.hrr_term(n, 1, 96).a_c.contains(1)


def test_second_term_a_is_minus_one_at_n1():
    assert P.hrr_term(1, 2, 128).a_c.contains(-1)


def test_partial_sum_rounds_exactly():
    assert P.hrr_partial_sum(1, P.n_exact(1), 128).nearest_integer() == 1
    s = P.hrr_partial_sum(100, P.n_exact(100), 256)
    assert s.nearest_integer() == 190569292
    assert s.rad_below(Fraction(1, 4))


def test_partial_sum_preconditions():
    with pytest.raises(ValueError):
        P.hrr_partial_sum(0, 5, 128)
    with pytest.raises(ValueError):
        P.hrr_partial_sum(10, 0, 128)
    with pytest.raises(ValueError):
        P.hrr_partial_sum(10, 5, 32)


def test_hrr_exact_certifies():
    for n in (1, 2, 10, 99, 500, 1234):
        r = P.hrr_exact(n)
        assert r.value == P.partition_oracle(n)
        assert r.partial.rad_float() < 0.25 and r.tail < 0.25


def test_tail_bound_dominates_actual_tail():
    n = 400
    N = 6
    full = P.hrr_partial_sum(n, 60, 256).mid_fraction()
    part = P.hrr_partial_sum(n, N, 256).mid_fraction()
    # terms beyond 60 are far below 1e-6 here
    assert abs(float(full - part)) <= P.tail_bound(n, N)


def test_tail_bound_summable_and_decreasing():
    vals = [P.tail_bound(1000, N) for N in (10, 20, 40, 80)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert P.tail_bound(1000, P.n_exact(1000)) < 0.25


def test_n_exact_lower_limit():
    for n in (1, 50, 2000):
        assert P.n_exact(n) >= math.ceil(math.sqrt(n)) + 8


def test_truncation_error_converged_and_sane():
    r = P.truncation_error(500, P.n_exact(500))
    assert abs(float(r.remainder)) < 0.5
    r = P.truncation_error(1000, 32)
    assert abs(float(r.remainder)) < P.partition_oracle(1000)


def test_truncation_error_reproducible_at_doubled_guard():
    n = 4096
    N = 64
    a = P.truncation_error(n, N)
    b = P.truncation_error(n, N, guard=192)
    assert abs(float(a.remainder - b.remainder)) <= a.remainder_rad + b.remainder_rad


def test_scan_single_point_reports_undefined_slope():
    res = P.error_exponent_scan([1024])
    assert res.slope is None and "fewer than two" in res.note


def test_scan_excludes_zero_remainders():
    rec = [
        P.TruncationRecord(16, 4, 1.0, 64, BallReal.exact(0, 64), Fraction(0), 0.0, math.log(16), None),
        P.TruncationRecord(32, 6, 1.0, 64, BallReal.exact(0, 64), Fraction(1, 10), 0.0, math.log(32), math.log(0.1)),
        P.TruncationRecord(64, 8, 1.0, 64, BallReal.exact(0, 64), Fraction(1, 20), 0.0, math.log(64), math.log(0.05)),
    ]
    slope, _, excluded = P.fit_slope(rec)
    assert excluded == [16]
    assert slope == pytest.approx(-1.0)


def test_scan_csv_schema():
    res = P.error_exponent_scan([256, 512], alpha=1.0)
    lines = P.scan_to_csv(res).splitlines()
    assert lines[0] == ",".join(P.SCAN_COLUMNS)
    assert len(lines) == 3
    assert P.scan_to_csv(res) == P.scan_to_csv(P.error_exponent_scan([256, 512], alpha=1.0))


def test_scan_input_validation():
    with pytest.raises(ValueError):
        P.error_exponent_scan([64, 32])
    with pytest.raises(ValueError):
        P.error_exponent_scan([64], alpha=0)


def test_geometric_values():
    assert P.geometric_n_values(2 ** 10, 2 ** 17) == [2 ** k for k in range(10, 18)]


@settings(max_examples=1000)
@given(st.integers(min_value=1, max_value=2000))
def test_exactness_property(n):
    assert P.hrr_partial_sum(n, P.n_exact(n)).nearest_integer() == P.partition_oracle(n)


@settings(max_examples=1000)
@given(st.integers(min_value=1, max_value=3000), st.integers(min_value=1, max_value=40))
def test_term_ball_soundness_at_higher_precision(n, c):
    lo = P.hrr_term(n, c, 80).term
    hi = P.hrr_term(n, c, 144).term
    assert lo.contains(hi.mid_mpf)


@settings(max_examples=1000)
@given(st.integers(min_value=1, max_value=5000), st.integers(min_value=1, max_value=60))
def test_terms_within_majorant(n, c):
    # |term(c)| <= lead * c * I_{3/2}-majorant / c, the summand of the tail bound
    t = abs(P.hrr_term(n, c, 80).term.mid_float())
    x = P.bessel_argument_float(n) / c
    lead = 2 * math.pi / (24 * n - 1) ** 0.75
    maj = lead * (x / 2) ** 1.5 * math.exp(min(x * x / 10, x)) / (0.75 * math.sqrt(math.pi))
    assert t <= maj * (1 + 1e-9)
