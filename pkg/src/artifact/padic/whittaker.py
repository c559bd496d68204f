"""Kirillov-model values and local integrals as truncated sums with certified tails.

A Kirillov function is recorded by its values on y = p^k.  Unramified
Whittaker values come from the spherical (MacDonald) formula

    W(a(p^k)) = q^{-k/2} h_k(alpha_1, alpha_2),  k >= 0,

with h_k the complete homogeneous polynomial of degree k.  Local integrals
are sums over k whose tails are bounded by polynomial-times-geometric
majorants; every result carries that bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

# below this separation the closed form loses accuracy; sum h_k directly
_NEAR_DEGENERATE = 1e-4


def complete_homogeneous(a1: complex, a2: complex, k: int) -> complex:
    """h_k(a1, a2) = sum_{i=0}^{k} a1^i a2^{k-i}; zero for k < 0."""
    if k < 0:
        return 0j
    if a1 == a2:
        return (k + 1) * a1 ** k
    if abs(a1 - a2) < _NEAR_DEGENERATE * max(1.0, abs(a1), abs(a2)):
        return sum(a1 ** i * a2 ** (k - i) for i in range(k + 1))
    return (a1 ** (k + 1) - a2 ** (k + 1)) / (a1 - a2)


def spherical_whittaker(satake: tuple[complex, complex], k: int, q: int) -> complex:
    """W(a(p^k)) of the spherical vector with W(1) = 1."""
    if k < 0:
        return 0j
    a1, a2 = satake
    return q ** (-k / 2) * complex(complete_homogeneous(a1, a2, k))


def spherical_whittaker_degenerate(alpha: complex, k: int, q: int) -> complex:
    """The alpha_1 = alpha_2 = alpha case: q^{-k/2} (k+1) alpha^k."""
    if k < 0:
        return 0j
    return q ** (-k / 2) * (k + 1) * alpha ** k


@dataclass(frozen=True)
class SphericalWhittakerTable:
    satake: tuple[complex, complex]
    q: int
    values: tuple[complex, ...]

    @classmethod
    def build(cls, satake: tuple[complex, complex], q: int, cutoff: int) -> "SphericalWhittakerTable":
        return cls(satake, q, tuple(spherical_whittaker(satake, k, q) for k in range(cutoff + 1)))

    def __call__(self, k: int) -> complex:
        if k < 0:
            return 0j
        return self.values[k]

    @property
    def central_value(self) -> complex:
        return self.satake[0] * self.satake[1]


# certified series -----------------------------------------------------------------

@dataclass(frozen=True)
class SeriesValue:
    value: complex
    terms: int
    tail_bound: float


def certified_series(term: Callable[[int], complex], ratio: float, degree: int, scale: float,
                     offset: int = 0, tol: float = 1e-17, max_terms: int = 100_000) -> SeriesValue:
    """sum_{j >= 0} term(j) given |term(j)| <= scale (j + 1 + offset)^degree ratio^j.

    Summation stops at the first J where the majorant tail
    b(J) / (1 - rho(J)), rho(J) = ((J + 2 + offset) / (J + 1 + offset))^degree ratio,
    drops below tol * max(1, |partial|).
    """
    if not 0 <= ratio < 1:
        raise ValueError(f"series ratio {ratio} is not below 1; the sum does not converge")
    total = 0j
    for J in range(max_terms):
        rho = ((J + 2 + offset) / (J + 1 + offset)) ** degree * ratio
        if rho < 1:
            bJ = scale * (J + 1 + offset) ** degree * ratio ** J
            tail = bJ / (1 - rho)
            if tail < tol * max(1.0, abs(total)):
                return SeriesValue(total, J, tail)
        total += term(J)
    raise ArithmeticError("series did not reach the requested tail bound")


# newform and translate data for Prop-5.1-type Kirillov checks ---------------------------

def kirillov_inner(f: Callable[[int], complex], g: Callable[[int], complex], kmin: int, ratio: float,
                   degree: int = 0, scale: float = 1.0) -> SeriesValue:
    """sum_k f(p^k) conj(g(p^k)) over k >= kmin (both vanish below kmin)."""
    return certified_series(lambda j: f(kmin + j) * np.conj(g(kmin + j)), ratio, degree, scale)


def steinberg_newvector(chi_at_p: complex, q: int) -> Callable[[int], complex]:
    """Unit-norm Kirillov new vector of the unramified twist St_chi: (chi(p) q^{-1})^k on k >= 0."""
    norm = math.sqrt(1 - q ** -2)

    def W(k: int) -> complex:
        return norm * (chi_at_p / q) ** k if k >= 0 else 0j

    return W


def unit_indicator_newvector() -> Callable[[int], complex]:
    """Kirillov new vector 1_{o^x} of a representation with L(s, pi) = 1."""
    return lambda k: 1.0 + 0j if k == 0 else 0j


def translate_kirillov(W: Callable[[int], complex], n: int) -> Callable[[int], complex]:
    """a(p^{-n}).W : y -> W(y p^{-n})."""
    return lambda k: W(k - n)


# local integrals ---------------------------------------------------------------------

def ramified_pairing_sum(alpha: complex, q: int, n: int) -> SeriesValue:
    """sum_k W'(a(p^k)) conj(W_3(a(p^k))) |p^k|^{-1/2} with W_3 = a(p^{-n}) of the newform q^{-k/2} 1_{k>=0}.

    W' is spherical with Satake (alpha, alpha^{-1}) and W'(1) = 1.  After the
    change k = n + j the sum is sum_j h_{n+j} q^{-j/2}.
    """
    r = max(abs(alpha), 1 / abs(alpha))
    t = q ** -0.5
    if r * t >= 1:
        raise ValueError("|alpha|^{+-1} q^{-1/2} must be below 1")
    a = (alpha, 1 / alpha)

    def term(j: int) -> complex:
        k = n + j
        Wp = spherical_whittaker(a, k, q)
        W3 = q ** (-(k - n) / 2)
        return Wp * np.conj(W3) * q ** (k / 2)

    return certified_series(term, r * t, 1, r ** n, offset=n)


def ramified_pairing_closed(alpha: complex, q: int, n: int) -> complex:
    """L(1/2, pi') {h_n - q^{-1/2} h_{n-1}} in the Satake pair (alpha, alpha^{-1})."""
    t = q ** -0.5
    L = 1 / ((1 - alpha * t) * (1 - t / alpha))
    h = lambda k: complete_homogeneous(alpha, 1 / alpha, k)
    return L * (h(n) - t * h(n - 1))


def unramified_pairing_sum(alpha: complex, alpha1: complex, q: int, n: int) -> SeriesValue:
    """As ramified_pairing_sum with W_3 = a(p^{-n}) of the spherical W of pi(1, omega^{-1}).

    omega(p) = alpha1; the spherical Whittaker function of pi(1, omega^{-1})
    has Satake pair (1, conj(alpha1)) for unitary omega.  Requires n >= 1.
    """
    if n < 1:
        raise ValueError("the unramified pairing is stated for n >= 1")
    r = max(abs(alpha), 1 / abs(alpha))
    r1 = max(1.0, abs(alpha1))
    t = q ** -0.5
    if r * r1 * t >= 1:
        raise ValueError("the pairing sum does not converge for these parameters")
    a = (alpha, 1 / alpha)
    b = (1.0 + 0j, np.conj(alpha1))

    def term(j: int) -> complex:
        k = n + j
        return spherical_whittaker(a, k, q) * np.conj(spherical_whittaker(b, k - n, q)) * q ** (k / 2)

    return certified_series(term, r * r1 * t, 2, r ** n, offset=n)


def unramified_pairing_closed(alpha: complex, alpha1: complex, q: int, n: int) -> complex:
    """L(1/2, pi') L(1/2, pi' x omega) {h_n - (1 + alpha1) t h_{n-1} + alpha1 t^2 h_{n-2}}, t = q^{-1/2}."""
    if n < 1:
        raise ValueError("the unramified pairing is stated for n >= 1")
    t = q ** -0.5
    L = 1 / ((1 - alpha * t) * (1 - t / alpha))
    Lw = 1 / ((1 - alpha1 * alpha * t) * (1 - alpha1 * t / alpha))
    h = lambda k: complete_homogeneous(alpha, 1 / alpha, k)
    return L * Lw * (h(n) - (1 + alpha1) * t * h(n - 1) + alpha1 * t * t * h(n - 2))


def _x(q: int, s: complex) -> complex:
    return q ** (-(1 + s))


def translated_self_pairing_sum(l: int, s: complex, q: int,
                                first: tuple[complex, complex] = (1, 1),
                                second: tuple[complex, complex] = (1, 1)) -> SeriesValue:
    """q^{l/2} sum_k W_1(a(p^{k-l})) conj(W_2(a(p^k))) |p^k|^s for spherical W_1, W_2."""
    x = abs(_x(q, s))
    r = max(1.0, *(abs(v) for v in first)) * max(1.0, *(abs(v) for v in second))
    if r * x >= 1:
        raise ValueError("the pairing sum does not converge for these parameters")

    def term(j: int) -> complex:
        k = l + j
        return (
            q ** (l / 2)
            * spherical_whittaker(first, k - l, q)
            * np.conj(spherical_whittaker(second, k, q))
            * q ** (-k * s)
        )

    scale = q ** (-l * complex(s).real) * r ** l
    return certified_series(term, r * x, 2, scale, offset=l)


def translated_self_pairing_closed(l: int, s: complex, q: int) -> complex:
    """q^{-ls} {(1 + x)/(1 - x)^3 + l/(1 - x)^2}, x = q^{-(1+s)}."""
    x = _x(q, s)
    return q ** (-l * s) * ((1 + x) / (1 - x) ** 3 + l / (1 - x) ** 2)


def A_ratio(l: int, s: complex, q: int) -> complex:
    """A_l(s) = q^{-ls} {1 + l (1 - x)/(1 + x)}, A_0 = 1."""
    if l == 0:
        return 1 + 0j
    x = _x(q, s)
    return q ** (-l * s) * (1 + l * (1 - x) / (1 + x))


def A_twisted_ratio(l: int, s: complex, q: int, alpha: complex, variant: bool = False) -> complex:
    """A'_l(s) = alpha^l q^{-ls} {1 + l (1 - alpha x)/(1 + alpha x)}.

    ``variant=True`` puts alpha q^{-l(1+s)} in the last
    denominator instead; that form agrees with the ratio of sums only for l <= 1.
    """
    if l == 0:
        return 1 + 0j
    x = _x(q, s)
    den = 1 + alpha * (q ** (-l * (1 + s)) if variant else x)
    return alpha ** l * q ** (-l * s) * (1 + l * (1 - alpha * x) / den)


def A_character_ratio(l: int, s: complex, q: int, alpha: complex) -> complex:
    """A''_l(s) = q^{-ls} {1 + conj(alpha)(1 - conj(alpha)^l)/(1 - conj(alpha)) (1 - alpha x)/(1 + x)}."""
    if l == 0:
        return 1 + 0j
    x = _x(q, s)
    ab = np.conj(alpha)
    geo = complete_homogeneous(ab, 1.0, l - 1) * ab  # ab (1 - ab^l)/(1 - ab)
    return q ** (-l * s) * (1 + geo * (1 - alpha * x) / (1 + x))


def twisted_ratio_sum(l: int, s: complex, q: int, alpha: complex) -> complex:
    """S'_l / S'_0 from the sums, second factor of Satake (conj alpha, conj alpha)."""
    ab = np.conj(alpha)
    num = translated_self_pairing_sum(l, s, q, (1, 1), (ab, ab)).value
    den = translated_self_pairing_sum(0, s, q, (1, 1), (ab, ab)).value
    return num / den


def character_ratio_sum(l: int, s: complex, q: int, alpha: complex) -> complex:
    """S''_l / S''_0 from the sums, both factors of Satake (1, alpha)."""
    a = (1.0 + 0j, alpha)
    num = translated_self_pairing_sum(l, s, q, a, a).value
    den = translated_self_pairing_sum(0, s, q, a, a).value
    return num / den


def plain_ratio_sum(l: int, s: complex, q: int) -> complex:
    return translated_self_pairing_sum(l, s, q).value / translated_self_pairing_sum(0, s, q).value


__all__ = [
    "A_character_ratio",
    "A_ratio",
    "A_twisted_ratio",
    "SeriesValue",
    "SphericalWhittakerTable",
    "certified_series",
    "character_ratio_sum",
    "complete_homogeneous",
    "kirillov_inner",
    "plain_ratio_sum",
    "ramified_pairing_closed",
    "ramified_pairing_sum",
    "spherical_whittaker",
    "spherical_whittaker_degenerate",
    "steinberg_newvector",
    "translate_kirillov",
    "translated_self_pairing_closed",
    "translated_self_pairing_sum",
    "twisted_ratio_sum",
    "unit_indicator_newvector",
    "unramified_pairing_closed",
    "unramified_pairing_sum",
]
