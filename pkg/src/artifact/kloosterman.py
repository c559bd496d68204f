"""Dedekind sums, the eta multiplier and half-integral-weight Kloosterman sums.

Conventions.  ``e(x) = exp(2 pi i x)``.  For ``gamma = [[a, b], [c, d]]`` with
``c > 0`` the multiplier is

    chi(gamma) = exp(pi i ((a + d)/(12c) - s(d, c) - 1/4)),

so that ``eta(gamma z) = chi(gamma) (cz + d)^(1/2) eta(z)`` with the principal
square root.  ``S(m, n, c)`` sums ``conj(chi(gamma)) e((m~ a + n~ d)/c)`` over
``0 <= a, d < c`` with ``ad = 1 mod c``, where ``m~ = m - 23/24`` and
``n~ = n - 23/24``.  Then ``A_c(n) = sqrt(-i) S(1, 1 - n, c)``.

Three independent evaluations of ``A_c(n)`` are provided: the definition sum
above, the classical Dedekind-sum form, and the closed form over solutions of
a quadratic congruence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from mpmath import libmp as L

from . import kernels
from .balls import BallComplex, BallReal, cos_sin_pi, sqrt as ball_sqrt

Matrix = tuple[int, int, int, int]


# Dedekind sums ---------------------------------------------------------

def _check_coprime(h: int, c: int) -> None:
    if c < 1:
        raise ValueError("modulus must be positive")
    if math.gcd(h, c) != 1:
        raise ValueError(f"gcd({h}, {c}) != 1")


def dedekind_sum(h: int, c: int) -> Fraction:
    """s(h, c) by the reciprocity law, in exact rational arithmetic."""
    _check_coprime(h, c)
    sign = 1
    total = Fraction(0)
    h %= c
    while h:
        # s(h, c) = (h^2 + c^2 + 1)/(12 h c) - 1/4 - s(c mod h, h)
        total += sign * (Fraction(h * h + c * c + 1, 12 * h * c) - Fraction(1, 4))
        sign = -sign
        h, c = c % h, h
    return total


def _sawtooth(x: Fraction) -> Fraction:
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_sum_bruteforce(h: int, c: int) -> Fraction:
    """s(h, c) straight from the sawtooth definition (O(c))."""
    _check_coprime(h, c)
    return sum((_sawtooth(Fraction(k, c)) * _sawtooth(Fraction(h * k, c)) for k in range(1, c)), Fraction(0))


# eta multiplier --------------------------------------------------------

@dataclass(frozen=True)
class Root24:
    """The root of unity e(k/24), stored by its exponent k mod 24."""

    k: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", self.k % 24)

    def __mul__(self, other: "Root24") -> "Root24":
        return Root24(self.k + other.k)

    def conjugate(self) -> "Root24":
        return Root24(-self.k)

    def value(self, prec: int = 53) -> mpmath.mpc:
        with mpmath.workprec(prec):
            return mpmath.expjpi(mpmath.mpf(self.k) / 12)

    def __complex__(self) -> complex:
        return complex(self.value())


def normalize_gamma(gamma: Matrix) -> Matrix:
    """Representative of +-gamma with c > 0, or c = 0 and d > 0."""
    a, b, c, d = gamma
    if c < 0 or (c == 0 and d < 0):
        return (-a, -b, -c, -d)
    return (a, b, c, d)


def eta_multiplier(gamma: Matrix) -> Root24:
    """chi(gamma) as an exact 24th root of unity.

    The input is normalised by -I first when needed, and the exponent is
    reduced in exact rationals; a failure of the (1/24)Z reduction raises.
    """
    a, b, c, d = gamma
    if a * d - b * c != 1:
        raise ValueError("gamma must have determinant 1")
    a, b, c, d = normalize_gamma(gamma)
    if c == 0:
        return Root24(b)
    phase = Fraction(a + d, 12 * c) - dedekind_sum(d, c) - Fraction(1, 4)
    k = phase * 12
    if k.denominator != 1:
        raise ArithmeticError(f"multiplier of {gamma} is not a 24th root of unity")
    return Root24(int(k))


def eta_qseries(z: mpmath.mpc, terms: int = 200) -> mpmath.mpc:
    """eta(z) from the pentagonal q-expansion truncated to ``terms`` terms."""
    q = mpmath.expjpi(2 * z)
    total = mpmath.mpc(0)
    count = 0
    k = 0
    while count < terms:
        for j in ((k,) if k == 0 else (k, -k)):
            if count >= terms:
                break
            total += (-1) ** (j % 2) * q ** (j * (3 * j - 1) // 2)
            count += 1
        k += 1
    return mpmath.expjpi(z / 12) * total


# admissible matrices and exponent tables ------------------------------

def admissible_matrices(c: int) -> list[Matrix]:
    """All [[a, b], [c, d]] in SL2(Z) with 0 <= a, d < c."""
    if c < 1:
        raise ValueError("c must be positive")
    out = []
    for a in range(c):
        for d in range(c):
            if (a * d - 1) % c == 0:
                out.append((a, (a * d - 1) // c, c, d))
    return out


@lru_cache(maxsize=4096)
def _definition_table(c: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, d, k) for the admissible matrices, with chi = e(k/24) from eta_multiplier."""
    mats = admissible_matrices(c)
    a = np.array([g[0] for g in mats], dtype=np.int64)
    d = np.array([g[3] for g in mats], dtype=np.int64)
    k = np.array([eta_multiplier(g).k for g in mats], dtype=np.int64)
    return a, d, k


def kloosterman_histogram(m: int, n: int, c: int) -> np.ndarray:
    """Counts of N mod 24c in S(m, n, c) = sum e(N / (24c)) (definition route)."""
    a, d, k = _definition_table(c)
    return kernels.exponent_histogram(a, d, k, c, m, n)


# fixed-point unit circle ---------------------------------------------

@lru_cache(maxsize=2_000_000)
def _circle_point(num: int, den: int, bits: int) -> tuple[int, int]:
    """Integers (C, S) with |cos(2 pi num/den) - C 2^-bits| <= 2^-bits, same for sin."""
    arg = L.from_rational(2 * num, den, bits + 40, L.round_nearest)
    c, s = L.mpf_cos_sin_pi(arg, bits + 40, L.round_nearest)
    return L.to_fixed(c, bits), L.to_fixed(s, bits)


def _bucket(prec: int) -> int:
    return max(64, -(-prec // 32) * 32)


def _sum_histogram(counts: np.ndarray, shift: int, mod: int, prec: int) -> BallComplex:
    """sum_N counts[N] e((N + shift)/mod) as a complex ball at ``prec`` bits."""
    bits = _bucket(prec) + 8
    re = 0
    im = 0
    total = 0
    for N in np.nonzero(counts)[0]:
        cnt = int(counts[N])
        g = math.gcd(int(N) + shift, mod)
        cs, sn = _circle_point(((int(N) + shift) % mod) // g, mod // g, bits)
        re += cnt * cs
        im += cnt * sn
        total += cnt
    # to_fixed truncates toward -inf: error < 2^-bits per entry, plus the cos error
    rad = L.from_man_exp(2 * total, -bits)
    p = bits + max(re.bit_length(), im.bit_length(), 1)
    return BallComplex(
        BallReal(L.from_man_exp(re, -bits), rad, p),
        BallReal(L.from_man_exp(im, -bits), rad, p),
    )


def kloosterman_S(m: int, n: int, c: int, prec: int = 64) -> BallComplex:
    """S(m, n, c) by the definition sum with exact multiplier exponents."""
    counts = kloosterman_histogram(m, n, c)
    return _sum_histogram(counts, 0, 24 * c, prec)


def _a_histogram(c: int, n: int) -> np.ndarray:
    """Counts of N mod 24c with A_c(n) = sum e(N/(24c)); sqrt(-i) = e(-3c/(24c)) folded in."""
    counts = kloosterman_histogram(1, 1 - n, c)
    return np.roll(counts, -3 * c)


def rademacher_A_complex(c: int, n: int, prec: int = 64) -> BallComplex:
    return _sum_histogram(_a_histogram(c, n), 0, 24 * c, prec)


def rademacher_A(c: int, n: int, prec: int = 64) -> BallReal:
    """A_c(n) = sqrt(-i) S(1, 1 - n, c) as a real ball.

    Realness is certified exactly: the exponent multiset is closed under
    N -> -N, so the imaginary parts cancel term by term.
    """
    counts = _a_histogram(c, n)
    mod = 24 * c
    mirrored = counts[(-np.arange(mod)) % mod]
    if not np.array_equal(counts, mirrored):
        raise ArithmeticError(f"A_{c}({n}) failed the exact realness certificate")
    return _sum_histogram(counts, 0, mod, prec).re


@lru_cache(maxsize=4096)
def _dedekind_phase_table(c: int) -> tuple[np.ndarray, np.ndarray]:
    """Units h mod c and the integers 12 c s(h, c)."""
    units = [0] if c == 1 else [h for h in range(1, c) if math.gcd(h, c) == 1]
    scaled = []
    for h in units:
        v = dedekind_sum(h, c) * 12 * c
        if v.denominator != 1:
            raise ArithmeticError("12 c s(h, c) is not an integer")
        scaled.append(int(v))
    return np.array(units, dtype=np.int64), np.array(scaled, dtype=np.int64)


def dedekind_form_A(c: int, n: int, prec: int = 64) -> BallComplex:
    """sum over h mod c, gcd(h, c) = 1, of exp(pi i s(h, c)) e(-n h / c)."""
    mod = 24 * c
    h, scaled = _dedekind_phase_table(c)
    # exp(pi i s) e(-nh/c) = e((12 c s - 24 n h) / (24 c))
    big = (scaled - 24 * ((n * h) % c)) % mod
    counts = np.bincount(big, minlength=mod)
    return _sum_histogram(counts, 0, mod, prec)


@lru_cache(maxsize=4096)
def _pentagonal_residues(c: int) -> np.ndarray:
    j = np.arange(2 * c, dtype=np.int64)
    return ((3 * j * j + j) // 2) % c


def selberg_solutions(c: int, n: int) -> list[int]:
    """j mod 2c with (3j^2 + j)/2 = -n mod c."""
    return [int(j) for j in np.nonzero((_pentagonal_residues(c) + n) % c == 0)[0]]


@lru_cache(maxsize=200_000)
def _selberg_cos(j: int, c: int, prec: int) -> BallReal:
    return cos_sin_pi(Fraction(6 * j + 1, 6 * c), prec)[0]


@lru_cache(maxsize=4096)
def _sqrt_c_over_3(c: int, prec: int) -> BallReal:
    return ball_sqrt(BallReal.exact(Fraction(c, 3), prec))


def selberg_whiteman_A(c: int, n: int, prec: int = 64) -> BallReal:
    """Closed form sqrt(c/3) sum (-1)^j cos((6j + 1) pi / (6c)) over selberg_solutions."""
    total = BallReal.exact(0, prec)
    for j in selberg_solutions(c, n):
        cs = _selberg_cos(j, c, prec)
        total = total - cs if j % 2 else total + cs
    return total * _sqrt_c_over_3(c, prec)


# partial sums ----------------------------------------------------------

@dataclass
class PartialSumReport:
    n: int
    X: int
    per_c: np.ndarray  # S(1, n, c)/c, c = 1..X
    total: BallComplex
    cumulative: np.ndarray

    def block(self, lo: int, hi: int) -> complex:
        """Sum of S(1, n, c)/c over lo < c <= hi."""
        return complex(self.per_c[lo:hi].sum())

    def prefix_radii(self) -> np.ndarray:
        """Error radius of cumulative[X - 1] for every X = 1..self.X."""
        return _prefix_radii(self.per_c)


_EPS = 2.0 ** -52


def _prefix_radii(per_c: np.ndarray) -> np.ndarray:
    # each of the <= c terms carries <= 8 eps from the angle and trig, each partial
    # sum adds <= c eps; dividing by c and summing X terms with X eps each
    c = np.arange(1, per_c.size + 1, dtype=np.float64)
    X = c
    return np.cumsum(8 * _EPS + _EPS * c) + X * _EPS * np.cumsum(np.abs(per_c))


def kloosterman_partial_sum(n: int, X: int, m: int = 1) -> PartialSumReport:
    """sum_{c <= X} S(m, n, c)/c in double precision with an a-priori error radius.

    Each summand is a sum of phi(c) unit vectors evaluated in double precision;
    a cos/sin error of 4 ulp and the summation error give the radius.
    """
    if X < 1:
        raise ValueError("X must be at least 1")
    s_vals = kernels.kloosterman_block(m, n, 1, X)
    c = np.arange(1, X + 1, dtype=np.float64)
    per_c = s_vals / c
    cumulative = np.cumsum(per_c)
    total = complex(cumulative[-1])
    err = float(_prefix_radii(per_c)[-1])
    ball = BallComplex.from_complex(total, err, 53)
    return PartialSumReport(n=n, X=X, per_c=per_c, total=ball, cumulative=cumulative)


def growth_fit(report: PartialSumReport, start: int = 10) -> float:
    """Smallest C with |partial(X)| <= C sqrt(X) log X for start <= X <= report.X."""
    X = np.arange(1, report.X + 1, dtype=np.float64)
    sel = X >= start
    ratio = np.abs(report.cumulative[sel]) / (np.sqrt(X[sel]) * np.log(X[sel]))
    return float(ratio.max())
