"""Midpoint-radius ball arithmetic on top of mpmath's raw binary floats.

A ball is a midpoint ``mid`` (an mpmath raw mpf tuple at ``prec`` bits) and a
nonnegative radius ``rad`` (a low-precision mpf rounded toward +inf).  Every
operation adds the propagated input error plus a bound for the rounding of the
new midpoint.

Error model: basic operations round to nearest, so the rounding error is at
most ``2**-prec`` relative.  Elementary functions (exp, cos, sin) are taken
from mpmath, which evaluates them with guard bits; we charge them ``4 ulp``
relative plus ``2**-prec`` absolute.  That allowance is the one assumption the
balls rest on, and the tests recompute every ball at ``prec + 64`` bits to
check it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from mpmath import libmp as L
import mpmath

RAD_PREC = 30
_CEIL = L.round_ceiling
_NEAR = L.round_nearest

Number = Union[int, Fraction, float, "BallReal"]


def _radd(a, b):
    return L.mpf_add(a, b, RAD_PREC, _CEIL)


def _rmul(a, b):
    return L.mpf_mul(a, b, RAD_PREC, _CEIL)


def _rdiv(a, b):
    return L.mpf_div(a, b, RAD_PREC, _CEIL)


def _rabs(x):
    """Upper bound for |x| as a radius-precision float."""
    return L.mpf_pos(L.mpf_abs(x), RAD_PREC, _CEIL)


def _lower_abs(x):
    """Lower bound for |x| at radius precision."""
    return L.mpf_pos(L.mpf_abs(x), RAD_PREC, L.round_floor)


def _ulp(x, prec: int, factor: int = 1):
    """factor * 2**-prec * |x|, rounded up."""
    if x == L.fzero:
        return L.fzero
    return L.mpf_shift(_rmul(_rabs(x), L.from_int(factor)), -prec)


def _to_mpf(value, prec: int):
    if isinstance(value, int):
        return L.from_int(value, prec, _NEAR), _ulp_exact_int(value, prec)
    if isinstance(value, Fraction):
        m = L.from_rational(value.numerator, value.denominator, prec, _NEAR)
        return m, _ulp(m, prec)
    if isinstance(value, float):
        return L.from_float(value), L.fzero
    raise TypeError(f"cannot convert {type(value).__name__} to a ball")


def _ulp_exact_int(value: int, prec: int):
    if value.bit_length() <= prec:
        return L.fzero
    return _ulp(L.from_int(value), prec)


class BallReal:
    """Real ball ``[mid - rad, mid + rad]``."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad=L.fzero, prec: int = 128):
        self.mid = mid
        self.rad = rad
        self.prec = prec

    # construction -----------------------------------------------------
    @classmethod
    def exact(cls, value: int | Fraction | float, prec: int) -> "BallReal":
        mid, rad = _to_mpf(value, prec)
        return cls(mid, rad, prec)

    @classmethod
    def pi(cls, prec: int) -> "BallReal":
        mid = L.mpf_pi(prec, _NEAR)
        return cls(mid, _ulp(mid, prec, 2), prec)

    @classmethod
    def from_mpf(cls, value: mpmath.mpf, rad: float | mpmath.mpf = 0, prec: int = 128) -> "BallReal":
        raw = value._mpf_ if isinstance(value, mpmath.mpf) else mpmath.mpf(value)._mpf_
        mid = L.mpf_pos(raw, prec, _NEAR)
        r = L.from_float(float(rad)) if not isinstance(rad, mpmath.mpf) else rad._mpf_
        return cls(mid, _radd(_rabs(r), _ulp(mid, prec)), prec)

    def _coerce(self, other) -> "BallReal":
        if isinstance(other, BallReal):
            return other
        return BallReal.exact(other, self.prec)

    # inspection -------------------------------------------------------
    @property
    def mid_mpf(self) -> mpmath.mpf:
        # make_mpf wraps the raw value; mpmath.mpf() would round to the global precision
        return mpmath.mp.make_mpf(self.mid)

    @property
    def rad_mpf(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self.rad)

    def mid_float(self) -> float:
        return L.to_float(self.mid)

    def rad_float(self) -> float:
        """Radius as a float, rounded up (inf if it does not fit)."""
        r = L.to_float(self.rad, rnd=_CEIL)
        return r

    def mid_fraction(self) -> Fraction:
        man, exp = L.to_man_exp(self.mid) if self.mid != L.fzero else (0, 0)
        return Fraction(man) * (Fraction(2) ** exp)

    def lower(self):
        return L.mpf_sub(self.mid, self.rad, self.prec, L.round_floor)

    def upper(self):
        return L.mpf_add(self.mid, self.rad, self.prec, _CEIL)

    def contains(self, value) -> bool:
        if isinstance(value, BallReal):
            diff = L.mpf_abs(L.mpf_sub(value.mid, self.mid))
            return L.mpf_le(L.mpf_add(diff, value.rad), self.rad)
        if isinstance(value, mpmath.mpf):
            v = value._mpf_
        elif isinstance(value, Fraction):
            v = L.from_rational(value.numerator, value.denominator, self.prec + 64)
        elif isinstance(value, int):
            v = L.from_int(value)
        else:
            v = L.from_float(float(value))
        diff = L.mpf_abs(L.mpf_sub(v, self.mid))
        return L.mpf_le(diff, self.rad)

    def overlaps(self, other: "BallReal") -> bool:
        diff = L.mpf_abs(L.mpf_sub(other.mid, self.mid))
        return L.mpf_le(diff, L.mpf_add(self.rad, other.rad))

    def rad_below(self, bound: Fraction | float) -> bool:
        b = L.from_rational(bound.numerator, bound.denominator, 64) if isinstance(bound, Fraction) else L.from_float(bound)
        return L.mpf_lt(self.rad, b)

    def is_positive(self) -> bool:
        return L.mpf_gt(self.mid, self.rad)

    def nearest_integer(self) -> int:
        return int(L.to_int(L.mpf_floor(L.mpf_add(self.mid, L.from_rational(1, 2, 4)))))

    def certified_integer(self) -> int | None:
        """The unique integer in the ball if the ball is narrower than 1/2 around it."""
        k = self.nearest_integer()
        diff = L.mpf_abs(L.mpf_sub(self.mid, L.from_int(k)))
        if L.mpf_lt(L.mpf_add(diff, self.rad), L.from_rational(1, 2, 8)):
            return k
        return None

    def __repr__(self) -> str:
        return f"BallReal({mpmath.nstr(self.mid_mpf, 20)} +/- {mpmath.nstr(self.rad_mpf, 3)})"

    # arithmetic -------------------------------------------------------
    def __neg__(self) -> "BallReal":
        return BallReal(L.mpf_neg(self.mid), self.rad, self.prec)

    def __abs__(self) -> "BallReal":
        return BallReal(L.mpf_abs(self.mid), self.rad, self.prec)

    def __add__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        mid = L.mpf_add(self.mid, o.mid, prec, _NEAR)
        rad = _radd(_radd(self.rad, o.rad), _ulp(mid, prec))
        return BallReal(mid, rad, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "BallReal":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BallReal":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        mid = L.mpf_mul(self.mid, o.mid, prec, _NEAR)
        rad = _radd(_rmul(_rabs(self.mid), o.rad), _rmul(_rabs(o.mid), self.rad))
        rad = _radd(rad, _rmul(self.rad, o.rad))
        rad = _radd(rad, _ulp(mid, prec))
        return BallReal(mid, rad, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BallReal":
        o = self._coerce(other)
        prec = max(self.prec, o.prec)
        low = L.mpf_sub(_lower_abs(o.mid), o.rad, RAD_PREC, L.round_floor)
        if not L.mpf_gt(low, L.fzero):
            raise ZeroDivisionError("divisor ball contains zero")
        mid = L.mpf_div(self.mid, o.mid, prec, _NEAR)
        # |x/y - mx/my| <= (|mx| ry + |my| rx) / (|my| (|my| - ry))
        num = _radd(_rmul(_rabs(self.mid), o.rad), _rmul(_rabs(o.mid), self.rad))
        den = L.mpf_mul(_lower_abs(o.mid), low, RAD_PREC, L.round_floor)
        rad = _radd(_rdiv(num, den), _ulp(mid, prec))
        return BallReal(mid, rad, prec)

    def __rtruediv__(self, other) -> "BallReal":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "BallReal":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = BallReal.exact(1, self.prec)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def with_prec(self, prec: int) -> "BallReal":
        mid = L.mpf_pos(self.mid, prec, _NEAR)
        err = L.mpf_abs(L.mpf_sub(mid, self.mid))
        return BallReal(mid, _radd(self.rad, _rabs(err)), prec)

    def add_error(self, err) -> "BallReal":
        if isinstance(err, BallReal):
            e = _radd(_rabs(err.mid), err.rad)
        elif isinstance(err, Fraction):
            e = L.from_rational(err.numerator, err.denominator, RAD_PREC, _CEIL)
        elif isinstance(err, mpmath.mpf):
            e = _rabs(err._mpf_)
        else:
            e = L.from_float(float(err), RAD_PREC, _CEIL)
        return BallReal(self.mid, _radd(self.rad, e), self.prec)


class BallComplex:
    """Complex ball stored as a real and imaginary BallReal (a rectangle)."""

    __slots__ = ("re", "im")

    def __init__(self, re: BallReal, im: BallReal):
        self.re = re
        self.im = im

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    @classmethod
    def from_complex(cls, value: complex, rad: float = 0.0, prec: int = 53) -> "BallComplex":
        z = complex(value)
        return cls(BallReal.from_mpf(mpmath.mpf(z.real), rad, prec), BallReal.from_mpf(mpmath.mpf(z.imag), rad, prec))

    @classmethod
    def from_mpc(cls, value: mpmath.mpc, rad=0, prec: int = 128) -> "BallComplex":
        v = mpmath.mpc(value)
        return cls(BallReal.from_mpf(v.real, rad, prec), BallReal.from_mpf(v.imag, rad, prec))

    def _coerce(self, other) -> "BallComplex":
        if isinstance(other, BallComplex):
            return other
        if isinstance(other, BallReal):
            return BallComplex(other, BallReal.exact(0, other.prec))
        if isinstance(other, complex):
            return BallComplex.from_complex(other, 0.0, self.prec)
        return BallComplex(BallReal.exact(other, self.prec), BallReal.exact(0, self.prec))

    def __add__(self, other) -> "BallComplex":
        o = self._coerce(other)
        return BallComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "BallComplex":
        o = self._coerce(other)
        return BallComplex(self.re - o.re, self.im - o.im)

    def __neg__(self) -> "BallComplex":
        return BallComplex(-self.re, -self.im)

    def __mul__(self, other) -> "BallComplex":
        o = self._coerce(other)
        return BallComplex(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BallComplex":
        o = self._coerce(other)
        den = o.re * o.re + o.im * o.im
        num = self * o.conjugate()
        return BallComplex(num.re / den, num.im / den)

    def conjugate(self) -> "BallComplex":
        return BallComplex(self.re, -self.im)

    def abs2(self) -> BallReal:
        return self.re * self.re + self.im * self.im

    def mid_complex(self) -> complex:
        return complex(self.re.mid_float(), self.im.mid_float())

    def mid_mpc(self) -> mpmath.mpc:
        return mpmath.mp.make_mpc((self.re.mid, self.im.mid))

    def rad_float(self) -> float:
        """Radius of the enclosing disc, as a float."""
        return float(mpmath.sqrt(self.re.rad_mpf ** 2 + self.im.rad_mpf ** 2)) * (1 + 2.0 ** -40)

    def contains(self, value: complex | mpmath.mpc) -> bool:
        if isinstance(value, mpmath.mpc):
            return self.re.contains(value.real) and self.im.contains(value.imag)
        v = complex(value)
        return self.re.contains(v.real) and self.im.contains(v.imag)

    def overlaps(self, other: "BallComplex") -> bool:
        return self.re.overlaps(other.re) and self.im.overlaps(other.im)

    def __repr__(self) -> str:
        return f"BallComplex({self.re!r}, {self.im!r})"


# elementary functions ------------------------------------------------

def _func_error(mid, prec: int):
    """Rounding allowance for an mpmath elementary function value."""
    return _radd(_ulp(mid, prec, 4), L.mpf_shift(L.fone, -prec))


def sqrt(x: BallReal) -> BallReal:
    low = L.mpf_sub(x.mid, x.rad, RAD_PREC, L.round_floor)
    if L.mpf_lt(low, L.fzero):
        raise ValueError("sqrt of a ball reaching below zero")
    mid = L.mpf_sqrt(x.mid, x.prec, _NEAR)
    if x.rad == L.fzero:
        prop = L.fzero
    elif low == L.fzero:
        prop = L.mpf_sqrt(x.rad, RAD_PREC, _CEIL)
    else:
        # |sqrt(m + d) - sqrt(m)| <= r / sqrt(m - r)
        prop = _rdiv(x.rad, L.mpf_sqrt(low, RAD_PREC, L.round_floor))
    return BallReal(mid, _radd(prop, _ulp(mid, x.prec)), x.prec)


def exp(x: BallReal) -> BallReal:
    mid = L.mpf_exp(x.mid, x.prec, _NEAR)
    if x.rad == L.fzero:
        prop = L.fzero
    else:
        # |e^(m+d) - e^m| <= e^m (e^r - 1) <= e^m r e^r
        er = L.mpf_exp(x.rad, RAD_PREC, _CEIL)
        prop = _rmul(_rmul(_rabs(mid), x.rad), _rmul(er, L.from_rational(1025, 1024, RAD_PREC, _CEIL)))
    return BallReal(mid, _radd(prop, _func_error(mid, x.prec)), x.prec)


def cos_sin_pi(x: Fraction, prec: int) -> tuple[BallReal, BallReal]:
    """cos(pi x) and sin(pi x) for an exact rational x."""
    arg = L.from_rational(x.numerator, x.denominator, prec + 20, _NEAR)
    c, s = L.mpf_cos_sin_pi(arg, prec, _NEAR)
    # argument rounding moves the value by at most pi * |arg| * 2^-(prec+20)
    arg_err = L.mpf_shift(_rmul(_rabs(arg), L.from_int(4)), -(prec + 20))
    rc = _radd(arg_err, _func_error(c, prec))
    rs = _radd(arg_err, _func_error(s, prec))
    return BallReal(c, rc, prec), BallReal(s, rs, prec)


def cos_sin(x: BallReal) -> tuple[BallReal, BallReal]:
    c, s = L.mpf_cos_sin(x.mid, x.prec, _NEAR)
    rc = _radd(x.rad, _func_error(c, x.prec))
    rs = _radd(x.rad, _func_error(s, x.prec))
    return BallReal(c, rc, x.prec), BallReal(s, rs, x.prec)


def log(x: BallReal) -> BallReal:
    low = L.mpf_sub(x.mid, x.rad, RAD_PREC, L.round_floor)
    if not L.mpf_gt(low, L.fzero):
        raise ValueError("log of a ball reaching zero")
    mid = L.mpf_log(x.mid, x.prec, _NEAR)
    prop = _rdiv(x.rad, low) if x.rad != L.fzero else L.fzero
    return BallReal(mid, _radd(prop, _func_error(mid, x.prec)), x.prec)
