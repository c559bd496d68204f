"""Exact partition numbers and the Hardy-Ramanujan-Rademacher series with ball error control.

    p(n) = 2 pi / (24n - 1)^(3/4) * sum_{c >= 1} A_c(n)/c * I_{3/2}(pi sqrt(24n - 1) / (6c))

Every summand is a ball.  Truncation after N terms is certified by an explicit
tail majorant built from |A_c(n)| <= c and a bound for I_{3/2}, so rounding the
partial sum to the nearest integer is a proof, not a heuristic.
"""

from __future__ import annotations

import csv
import io
import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath
import numpy as np

from .balls import BallReal, sqrt as ball_sqrt
from .kloosterman import rademacher_A
from .special_functions import bessel_I_3_2

MAX_ORACLE_N = 2_000_000
CERT_RADIUS = Fraction(1, 4)


class PrecisionError(ArithmeticError):
    """The accumulated ball radius is too wide for certified rounding."""


class OracleCapacityError(MemoryError):
    """Requested partition number is beyond the oracle's table budget."""


# exact oracle ----------------------------------------------------------------

class _PentagonalTable:
    """Append-only table p(0..n) by Euler's pentagonal recurrence.

    Readers see a fully written prefix; a lock serialises extension.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._values = np.empty(1, dtype=object)
        self._values[0] = 1
        self._size = 1

    @staticmethod
    def _pentagonals(n: int) -> tuple[np.ndarray, np.ndarray]:
        plus: list[int] = []
        minus: list[int] = []
        k = 1
        while k * (3 * k - 1) // 2 <= n:
            target = plus if k % 2 else minus
            target.append(k * (3 * k - 1) // 2)
            if k * (3 * k + 1) // 2 <= n:
                target.append(k * (3 * k + 1) // 2)
            k += 1
        return np.array(plus, dtype=np.int64), np.array(minus, dtype=np.int64)

    def get(self, n: int) -> int:
        if n < self._size:
            return int(self._values[n])
        with self._lock:
            if n >= self._size:
                self._extend(n)
        return int(self._values[n])

    def _extend(self, n: int) -> None:
        values = np.empty(n + 1, dtype=object)
        values[: self._size] = self._values[: self._size]
        plus, minus = self._pentagonals(n)
        for i in range(self._size, n + 1):
            ip = int(np.searchsorted(plus, i, side="right"))
            im = int(np.searchsorted(minus, i, side="right"))
            total = values[i - plus[:ip]].sum() if ip else 0
            if im:
                total -= values[i - minus[:im]].sum()
            values[i] = total
        self._values = values
        self._size = n + 1


_TABLE = _PentagonalTable()


def partition_oracle(n: int) -> int:
    """p(n) exactly; extends the shared memo table to n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_ORACLE_N:
        raise OracleCapacityError(f"n={n} exceeds the oracle budget {MAX_ORACLE_N}")
    return _TABLE.get(n)


def partition_bruteforce(n: int) -> int:
    """p(n) by enumerating partitions with parts in nonincreasing order (small n only)."""

    def count(remaining: int, largest: int) -> int:
        if remaining == 0:
            return 1
        return sum(count(remaining - part, part) for part in range(min(remaining, largest), 0, -1))

    return count(n, n)


# precision and truncation policy ----------------------------------------------

def bessel_argument_float(n: int) -> float:
    return math.pi * math.sqrt(24 * n - 1) / 6


def default_precision(n: int) -> int:
    """Bits to hold p(n) plus 96 guard bits."""
    return math.ceil(math.pi * math.sqrt(2 * n / 3) / math.log(2)) + 96


def term_precision(n: int, c: int, N: int, guard: int) -> int:
    """Working precision for the c-th summand: its magnitude in bits plus guard bits."""
    mag = bessel_argument_float(n) / c / math.log(2)
    return max(64, math.ceil(mag) + guard + N.bit_length())


def tail_bound(n: int, N: int) -> float:
    """Upper bound for sum_{c > N} |term(c)|.

    Uses |A_c(n)| <= c and, for 0 < y <= y_max = x/(N+1),
    I_{3/2}(y) <= (y/2)^{3/2} exp(min(y_max^2/10, y_max)) / Gamma(5/2),
    then sum_{c > N} c^{-3/2} <= 2/sqrt(N).
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    with mpmath.workprec(64):
        x = mpmath.pi * mpmath.sqrt(24 * n - 1) / 6
        ymax = x / (N + 1)
        growth = mpmath.exp(min(ymax * ymax / 10, ymax))
        lead = 2 * mpmath.pi / mpmath.power(24 * n - 1, mpmath.mpf(3) / 4)
        bessel = (x / 2) ** mpmath.mpf(1.5) / mpmath.gamma(mpmath.mpf(2.5))
        bound = lead * bessel * growth * 2 / mpmath.sqrt(N)
    return float(bound) * (1 + 2.0 ** -20)


def n_exact(n: int) -> int:
    """max(ceil(sqrt n) + 8, least N with tail_bound(n, N) < 1/4)."""
    N = math.isqrt(n)
    if N * N < n:
        N += 1
    N += 8
    while tail_bound(n, N) >= 0.25:
        N += 1
    return N


# summands ------------------------------------------------------------------------

@dataclass
class HrrTerm:
    n: int
    c: int
    a_c: BallReal
    bessel: BallReal
    term: BallReal


def _check_prec(prec: int) -> None:
    if prec < 64:
        raise ValueError(f"invalid precision {prec}: need at least 64 bits")


def _leading_factor(n: int, prec: int) -> BallReal:
    """2 pi / (24n - 1)^(3/4)."""
    v = BallReal.exact(24 * n - 1, prec)
    r = ball_sqrt(v)
    return 2 * BallReal.pi(prec) / (r * ball_sqrt(r))


def _bessel_argument(n: int, prec: int) -> BallReal:
    return BallReal.pi(prec) * ball_sqrt(BallReal.exact(24 * n - 1, prec)) / 6


def hrr_term(n: int, c: int, prec: int) -> HrrTerm:
    """The c-th summand of the series for p(n) at ``prec`` bits."""
    _check_prec(prec)
    if n < 1 or c < 1:
        raise ValueError("need n >= 1 and c >= 1")
    a_c = rademacher_A(c, n, prec)
    bessel = bessel_I_3_2(_bessel_argument(n, prec) / c, prec)
    term = _leading_factor(n, prec) * a_c / c * bessel
    return HrrTerm(n=n, c=c, a_c=a_c, bessel=bessel, term=term)


def hrr_partial_sum(n: int, N: int, prec: int | None = None, guard: int | None = None) -> BallReal:
    """Ball containing sum_{c <= N} term(c).

    ``prec`` is the precision of the first (largest) term; later terms use
    proportionally fewer bits so that each carries the same absolute error.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if N < 1:
        raise ValueError("N must be at least 1")
    if prec is None:
        prec = default_precision(n)
    _check_prec(prec)
    if guard is None:
        guard = max(8, prec - math.ceil(bessel_argument_float(n) / math.log(2)) - N.bit_length())
    top = max(prec, term_precision(n, 1, N, guard))
    lead = _leading_factor(n, top)
    x = _bessel_argument(n, top)
    total = BallReal.exact(0, top)
    for c in range(1, N + 1):
        p = min(top, term_precision(n, c, N, guard))
        a_c = rademacher_A(c, n, p)
        bessel = bessel_I_3_2(x.with_prec(p) / c, p)
        total = total + lead.with_prec(p) * a_c / c * bessel
    return total


@dataclass
class CertifiedValue:
    n: int
    N: int
    prec: int
    partial: BallReal
    tail: float
    value: int


def hrr_exact(n: int, prec: int | None = None, max_doublings: int = 4) -> CertifiedValue:
    """p(n) from the series with N = n_exact(n), doubling guard bits until the ball certifies."""
    N = n_exact(n)
    tail = tail_bound(n, N)
    prec = prec if prec is not None else default_precision(n)
    guard = max(8, prec - math.ceil(bessel_argument_float(n) / math.log(2)) - N.bit_length())
    for _ in range(max_doublings + 1):
        partial = hrr_partial_sum(n, N, prec, guard)
        if partial.rad_below(CERT_RADIUS) and tail < 0.25:
            return CertifiedValue(n, N, prec, partial, tail, partial.nearest_integer())
        guard *= 2
        prec = max(prec, term_precision(n, 1, N, guard))
    raise PrecisionError(f"radius {partial.rad_float():.3g} >= 1/4 for n={n} after {max_doublings} doublings")


# truncation error ----------------------------------------------------------------

@dataclass
class TruncationRecord:
    n: int
    N: int
    alpha: float
    prec_bits: int
    partial: BallReal
    remainder: Fraction  # p(n) - midpoint of the partial sum, exact
    remainder_rad: float  # radius of the partial sum
    log_n: float
    log_abs_R: float | None  # None when the remainder is indistinguishable from 0

    @property
    def exponent_datum(self) -> tuple[float, float | None]:
        return (self.log_n, self.log_abs_R)


def truncation_error(n: int, N: int, alpha: float = float("nan"), guard: int = 96, max_doublings: int = 4) -> TruncationRecord:
    """R(n, N) = p(n) - sum_{c <= N} term(c), with the partial sum's radius.

    Guard bits are doubled until the radius is below 1/4 and below 2^-20 |R|
    (or below 2^-guard when R is tiny).
    """
    exact = partition_oracle(n)
    for _ in range(max_doublings + 1):
        prec = term_precision(n, 1, N, guard)
        partial = hrr_partial_sum(n, N, prec, guard)
        remainder = exact - partial.mid_fraction()
        rad = partial.rad_float()
        if rad < 0.25 and (rad <= abs(float(remainder)) * 2.0 ** -20 or rad <= 2.0 ** -guard):
            break
        guard *= 2
    else:
        raise PrecisionError(f"could not resolve R({n}, {N}) above its radius")
    logR = math.log(abs(float(remainder))) if abs(float(remainder)) > 2 * rad else None
    return TruncationRecord(
        n=n,
        N=N,
        alpha=alpha,
        prec_bits=prec,
        partial=partial,
        remainder=remainder,
        remainder_rad=rad,
        log_n=math.log(n),
        log_abs_R=logR,
    )


@dataclass
class ScanResult:
    records: list[TruncationRecord]
    slope: float | None
    intercept: float | None
    excluded: list[int] = field(default_factory=list)
    note: str = ""


def fit_slope(records: Iterable[TruncationRecord]) -> tuple[float, float, list[int]]:
    """Least-squares slope and intercept of log|R| against log n; zero remainders excluded."""
    xs: list[float] = []
    ys: list[float] = []
    excluded: list[int] = []
    for r in records:
        if r.log_abs_R is None:
            excluded.append(r.n)
            continue
        xs.append(r.log_n)
        ys.append(r.log_abs_R)
    if len(xs) < 2:
        raise ValueError("slope undefined: fewer than two usable data points")
    slope, intercept = np.polyfit(np.array(xs), np.array(ys), 1)
    return float(slope), float(intercept), excluded


def error_exponent_scan(n_values: list[int], alpha: float = 1.0, guard: int = 96) -> ScanResult:
    """TruncationRecords at N = ceil(alpha sqrt n) and the fitted log-log slope."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if any(b < a for a, b in zip(n_values, n_values[1:])):
        raise ValueError("n_values must be sorted ascending")
    if any(n < 16 for n in n_values):
        raise ValueError("every n must be at least 16")
    records = []
    for n in n_values:
        N = max(1, math.ceil(alpha * math.sqrt(n) - 1e-12))
        records.append(truncation_error(n, N, alpha, guard))
    try:
        slope, intercept, excluded = fit_slope(records)
        note = f"excluded zero remainders at n={excluded}" if excluded else ""
        return ScanResult(records, slope, intercept, excluded, note)
    except ValueError as exc:
        excluded = [r.n for r in records if r.log_abs_R is None]
        return ScanResult(records, None, None, excluded, str(exc))


def geometric_n_values(lo: int, hi: int) -> list[int]:
    """Powers of two from lo to hi inclusive (lo and hi rounded to powers of two)."""
    a = max(0, (lo - 1).bit_length())
    b = hi.bit_length() - 1
    return [1 << k for k in range(a, b + 1)]


SCAN_COLUMNS = ["n", "N", "alpha", "prec_bits", "partial_mid", "partial_rad", "remainder", "log_n", "log_abs_R"]


def _fmt_mid(b: BallReal) -> str:
    mid = b.mid_mpf
    digits = max(1, int(mpmath.log10(abs(mid)))) + 25 if mid != 0 else 25
    with mpmath.workprec(b.prec):
        return mpmath.nstr(mid, digits, strip_zeros=False)


def scan_to_csv(result: ScanResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_COLUMNS)
    for r in result.records:
        writer.writerow([
            r.n,
            r.N,
            repr(r.alpha),
            r.prec_bits,
            _fmt_mid(r.partial),
            f"{r.remainder_rad:.6e}",
            mpmath.nstr(mpmath.mpf(r.remainder.numerator) / r.remainder.denominator, 20),
            f"{r.log_n:.15g}",
            "" if r.log_abs_R is None else f"{r.log_abs_R:.15g}",
        ])
    return buf.getvalue()


__all__ = [
    "CERT_RADIUS",
    "CertifiedValue",
    "HrrTerm",
    "OracleCapacityError",
    "PrecisionError",
    "SCAN_COLUMNS",
    "ScanResult",
    "TruncationRecord",
    "default_precision",
    "error_exponent_scan",
    "fit_slope",
    "geometric_n_values",
    "hrr_exact",
    "hrr_partial_sum",
    "hrr_term",
    "n_exact",
    "partition_bruteforce",
    "partition_oracle",
    "scan_to_csv",
    "tail_bound",
    "term_precision",
    "truncation_error",
]
