"""I_{3/2}, the Whittaker function W_{kappa,mu}, and the line-model transform xi.

``xi(x, s)`` is the Fourier transform

    xi(x) = int_R (1 + u^2)^(-(1-s)/2) ((u - i)/|u - i|)^(1/2) e^(-2 pi i u x) du

(principal square root), which only converges conditionally.  Two routes are
implemented: the closed form in terms of W_{+-1/4, s/2}(4 pi |x|), and a
Gaussian-regulated quadrature extrapolated to zero regulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .balls import BallComplex, BallReal, exp as ball_exp, sqrt as ball_sqrt


# I_{3/2} -----------------------------------------------------------------

def _as_ball(x, prec: int) -> BallReal:
    if isinstance(x, BallReal):
        return x if x.prec >= prec else x.with_prec(prec)
    if isinstance(x, (int, Fraction)):
        return BallReal.exact(x, prec)
    if isinstance(x, mpmath.mpf):
        return BallReal.from_mpf(x, 0, prec)
    return BallReal.exact(float(x), prec)


def bessel_I_3_2_series(x, prec: int = 128) -> BallReal:
    """Ascending series (x/2)^{3/2} sum (x^2/4)^k / (k! Gamma(k + 5/2)) with a bounded tail."""
    xb = _as_ball(x, prec)
    if not xb.is_positive():
        raise ValueError("I_{3/2} needs x > 0")
    q = xb * xb / 4
    term = BallReal.exact(1, prec)
    total = BallReal.exact(1, prec)
    xf = abs(xb.mid_float())
    k = 0
    target = 2.0 ** -(prec + 8)
    while True:
        term = term * q / ((k + 1) * Fraction(2 * k + 5, 2))
        total = total + term
        k += 1
        ratio = (xf * xf / 4) / ((k + 1) * (k + 2.5)) * (1 + 1e-9)
        if ratio < 0.5 and abs(term.mid_float()) <= target * abs(total.mid_float()):
            tail = (abs(term.mid_float()) + term.rad_float()) * ratio / (1 - ratio)
            total = total.add_error(tail * (1 + 1e-6))
            break
    half = xb / 2
    gamma52 = ball_sqrt(BallReal.pi(prec)) * Fraction(3, 4)
    return half * ball_sqrt(half) / gamma52 * total


def bessel_I_3_2(x, prec: int = 128) -> BallReal:
    """I_{3/2}(x) = sqrt(2/(pi x)) (cosh x - sinh x / x).

    For x >= 1 the closed form is used as (e^x (1 - 1/x) + e^-x (1 + 1/x))/2,
    which has no cancellation there; below 1 the ascending series is used.
    """
    xb = _as_ball(x, prec)
    if not xb.is_positive():
        raise ValueError("I_{3/2} needs x > 0")
    if xb.mid_float() < 1.0:
        return bessel_I_3_2_series(xb, prec)
    ex = ball_exp(xb)
    inv = 1 / xb
    bracket = (ex * (1 - inv) + (1 + inv) / ex) / 2
    return ball_sqrt(2 / (BallReal.pi(prec) * xb)) * bracket


def bessel_I_3_2_closed(x, prec: int = 128) -> BallReal:
    """The closed form evaluated literally, at any x > 0 (used for route comparison)."""
    xb = _as_ball(x, prec)
    ex = ball_exp(xb)
    cosh = (ex + 1 / ex) / 2
    sinh = (ex - 1 / ex) / 2
    return ball_sqrt(2 / (BallReal.pi(prec) * xb)) * (cosh - sinh / xb)


def bessel_I_3_2_majorant(x: float) -> float:
    """Upper bound (x/2)^{3/2} exp(x^2/10) / Gamma(5/2) for I_{3/2}(x), x > 0."""
    return (x / 2) ** 1.5 * math.exp(x * x / 10) / (0.75 * math.sqrt(math.pi))


# Whittaker W -------------------------------------------------------------

@dataclass(frozen=True)
class WhittakerQuery:
    kappa: float
    mu: complex
    z: float
    prec: int = 53


def _ball_from_mpc(value: mpmath.mpc, err, prec: int) -> BallComplex:
    return BallComplex.from_mpc(value, mpmath.mpf(err), prec)


def whittaker_W(q: WhittakerQuery) -> BallComplex:
    """W_{kappa,mu}(z) from the integral representation

        z^k e^{-z/2} / Gamma(1/2 - k + mu) int_0^inf t^{-k-1/2+mu} (1 + t/z)^{k-1/2+mu} e^{-t} dt,

    by tanh-sinh quadrature on [0, T] (in the variable u = t^(1/4)) plus a
    bound for the tail beyond T.
    """
    prec = max(q.prec, 53)
    with mpmath.workprec(prec + 20):
        kappa = mpmath.mpf(q.kappa)
        mu = mpmath.mpc(q.mu)
        z = mpmath.mpf(q.z)
        if z <= 0:
            raise ValueError("z must be positive")
        half = mpmath.mpf(1) / 2
        if abs(mu + (kappa - half)) < mpmath.eps or abs(mu - (kappa - half)) < mpmath.eps:
            value = z ** kappa * mpmath.exp(-z / 2)
            return _ball_from_mpc(mpmath.mpc(value), 0, prec)
        if mpmath.re(half - kappa + mu) <= 0:
            if mpmath.re(half - kappa - mu) > 0:
                mu = -mu
            else:
                raise ValueError("Re(1/2 - kappa +- mu) <= 0: outside the integral representation")
        a = -kappa - half + mu
        b = kappa - half + mu

        # t = u^4 flattens the t^a endpoint singularity, whose oscillation in
        # log t defeats tanh-sinh when Im(mu) != 0
        def f(u):
            t = u ** 4
            return 4 * u ** 3 * t ** a * (1 + t / z) ** b * mpmath.exp(-t)

        ra, rb = float(mpmath.re(a)), float(mpmath.re(b))
        tol = mpmath.mpf(2) ** (-prec - 4)
        T = mpmath.mpf(prec * 0.75 + 40)
        if rb <= 0:
            tail = mpmath.gammainc(ra + 1, T)
        else:
            tail = (1 / T + 1 / z) ** rb * mpmath.gammainc(ra + rb + 1, T)
        nodes = [mpmath.mpf(0), mpmath.mpf(1), mpmath.root(8, 4), mpmath.root(T, 4)]
        integral, err = mpmath.quad(f, nodes, error=True, maxdegree=10)
        pref = z ** kappa * mpmath.exp(-z / 2) / mpmath.gamma(half - kappa + mu)
        value = pref * integral
        rad = abs(pref) * (abs(err) + abs(tail)) + abs(value) * tol
    return _ball_from_mpc(value, rad, prec)


# xi: closed form -----------------------------------------------------------

@dataclass(frozen=True)
class XiQuery:
    x: float
    s: complex
    prec: int = 53

    def __post_init__(self) -> None:
        if self.x == 0:
            raise ValueError("x must be nonzero")


def _xi_phase(x: float, s: mpmath.mpc, variant: bool) -> mpmath.mpc:
    ipi = mpmath.mpc(0, 1) * mpmath.pi
    i = mpmath.mpc(0, 1)
    if x > 0:
        if variant:
            return i * mpmath.exp(-ipi * s / 2) + mpmath.exp(ipi * s / 2)
        return mpmath.exp(-ipi * s / 2) - i * mpmath.exp(ipi * s / 2)
    if variant:
        return i * mpmath.exp(ipi * s / 2) - mpmath.exp(-ipi * s / 2)
    return mpmath.exp(ipi * s / 2) - i * mpmath.exp(-ipi * s / 2)


def xi_closed_form(q: XiQuery, variant_phase: bool = False) -> BallComplex:
    """Closed form of xi(x) through W_{1/4, s/2}(4 pi x) (x > 0) or W_{-1/4, s/2}(4 pi |x|) (x < 0).

    value = phase * 2^(-1/2 + s/2) (2 pi |x|)^(-1/2 - s/2) Gamma(1/2 + s/2 -+ 1/4) W_{+-1/4, s/2}(4 pi |x|)

    The default phase, e^{-i pi s/2} - i e^{i pi s/2} for x > 0 and
    e^{i pi s/2} - i e^{-i pi s/2} for x < 0, is the one that reproduces the
    defining integral.  ``variant_phase=True`` selects
    i e^{-i pi s/2} + e^{i pi s/2} and i e^{i pi s/2} - e^{-i pi s/2}, which
    have the same modulus for s in iR but a different argument.
    """
    if q.x == 0:
        raise ValueError("x must be nonzero")
    prec = max(q.prec, 53)
    with mpmath.workprec(prec + 20):
        s = mpmath.mpc(q.s)
        ax = mpmath.mpf(abs(q.x))
        phase = _xi_phase(q.x, s, variant_phase)
        if q.x > 0:
            gam = mpmath.gamma(mpmath.mpf(1) / 4 + s / 2)
            kappa = 0.25
        else:
            gam = mpmath.gamma(mpmath.mpf(3) / 4 + s / 2)
            kappa = -0.25
        w = whittaker_W(WhittakerQuery(kappa, complex(s / 2), float(4 * mpmath.pi * ax), prec))
        pref = phase * mpmath.power(2, -mpmath.mpf(1) / 2 + s / 2) * mpmath.power(2 * mpmath.pi * ax, -mpmath.mpf(1) / 2 - s / 2) * gam
        value = pref * w.mid_mpc()
        rad = abs(pref) * w.rad_float() + abs(value) * mpmath.mpf(2) ** (-prec)
    return _ball_from_mpc(value, rad, prec)


def xi_density_form(x: float, s: complex, prec: int = 53) -> BallReal:
    """(e^{-i pi s} + e^{i pi s})/pi |Gamma((1+s)/2 - sgn/4)|^2 |W_{sgn/4, s/2}(4 pi |x|)|^2 / (4 pi |x|)."""
    sgn = 1 if x > 0 else -1
    with mpmath.workprec(prec + 20):
        s_m = mpmath.mpc(s)
        ipi = mpmath.mpc(0, 1) * mpmath.pi
        lead = mpmath.re(mpmath.exp(-ipi * s_m) + mpmath.exp(ipi * s_m)) / mpmath.pi
        gam = abs(mpmath.gamma((1 + s_m) / 2 - mpmath.mpf(sgn) / 4)) ** 2
        w = whittaker_W(WhittakerQuery(sgn / 4, complex(s_m / 2), float(4 * mpmath.pi * abs(x)), prec))
        wabs = abs(w.mid_mpc())
        coef = lead * gam / (4 * mpmath.pi * abs(x))
        value = coef * wabs ** 2
        rad = coef * (2 * wabs * w.rad_float() + w.rad_float() ** 2) + value * mpmath.mpf(2) ** (-prec)
    return BallReal.from_mpf(value, rad, prec)


def whittaker_density(x: float, s: complex, prec: int = 53) -> BallReal:
    """|xi(x)|^2 / pi from the closed form; nonnegative by construction."""
    xi = xi_closed_form(XiQuery(x, s, prec))
    dens = xi.abs2() / BallReal.pi(max(prec, 64))
    if mpmath.mpf(dens.mid) < 0:
        raise ArithmeticError("density midpoint negative")
    return dens


# xi: regulated quadrature -------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


@dataclass
class QuadratureResult:
    value: BallComplex
    regulators: list[float]
    raw: list[complex]
    error_estimate: float
    converged: bool
    table: list[list[complex]] = field(default_factory=list)


def _xi_integrand(u: np.ndarray, x: float, s: complex, eps: float) -> np.ndarray:
    phase = np.sqrt((u - 1j) / np.abs(u - 1j))
    return (1 + u * u) ** (-(1 - s) / 2) * phase * np.exp(-2j * np.pi * u * x) * np.exp(-eps * u * u)


def regulated_integral(x: float, s: complex, eps: float, target: float = 1e-15) -> complex:
    """int_R g(u) e^{-eps u^2} du by composite 20-point Gauss-Legendre panels on [-U, U].

    U is chosen so the Gaussian tail bound e^{-eps U^2}/(2 eps U) is below target/10;
    the rest of the integrand has modulus <= 1.
    """
    U = 1.0
    while math.exp(-eps * U * U) / (2 * eps * U) > target / 10:
        U *= 1.25
    width = 0.5 / max(abs(x), 1.0)
    panels = int(math.ceil(2 * U / width))
    edges = np.linspace(-U, U, panels + 1)
    mids = (edges[:-1] + edges[1:]) / 2
    half = (edges[1] - edges[0]) / 2
    u = (mids[:, None] + half * _GL_NODES[None, :]).ravel()
    w = np.tile(_GL_WEIGHTS * half, panels)
    return complex(np.sum(w * _xi_integrand(u, x, s, eps)))


def default_regulators(x: float, levels: int = 7) -> list[float]:
    """eps_0 2^-j with eps_0 small enough that exp(-pi^2 x^2 / eps_0) < e^-45."""
    eps0 = min(0.5, math.pi ** 2 * x * x / 45)
    return [eps0 * 2.0 ** -j for j in range(levels)]


def xi_quadrature(q: XiQuery, regulator: list[float] | None = None, rtol: float = 1e-3) -> QuadratureResult:
    """Gaussian-regulated quadrature of xi, Richardson-extrapolated in the regulator.

    The regulator sequence must halve at each step; the extrapolation assumes an
    expansion in integer powers of eps.  The error estimate is the change between
    the last two extrapolation orders (heuristic, not a certified bound).
    """
    eps = list(regulator) if regulator is not None else default_regulators(q.x)
    if len(eps) < 2 or any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("regulator sequence must be decreasing with at least two entries")
    for a, b in zip(eps, eps[1:]):
        if not math.isclose(a / b, 2.0, rel_tol=1e-12):
            raise ValueError("regulator sequence must halve at each step")
    raw = [regulated_integral(q.x, complex(q.s), e) for e in eps]
    table = [[v] for v in raw]
    for j in range(1, len(raw)):
        for k in range(1, j + 1):
            prev = table[j][k - 1]
            table[j].append(prev + (prev - table[j - 1][k - 1]) / (2 ** k - 1))
    best = table[-1][-1]
    err = abs(table[-1][-1] - table[-1][-2])
    err = max(err, abs(table[-1][-1] - table[-2][-1]))
    converged = err <= rtol * abs(best)
    return QuadratureResult(
        value=BallComplex.from_complex(best, err, 53),
        regulators=eps,
        raw=raw,
        error_estimate=err,
        converged=converged,
        table=table,
    )
