"""Characters of Q_p^x: a value at p and a character table of (Z/p^c)^x."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np


def _primitive_root(p: int, c: int) -> int:
    """A generator of (Z/p^c)^x for odd p."""
    M = p ** c
    phi = (p - 1) * p ** (c - 1)
    factors = {f for f in range(2, phi + 1) if phi % f == 0 and all(f % r for r in range(2, int(f ** 0.5) + 1))}
    for g in range(2, M):
        if g % p and all(pow(g, phi // f, M) != 1 for f in factors):
            return g
    raise ArithmeticError("no primitive root")


@dataclass(frozen=True)
class LocalCharacter:
    """chi(p^k u) = value_at_uniformizer^k * unit_table[u mod p^conductor]."""

    p: int
    value_at_uniformizer: complex
    conductor_exponent: int
    unit_table: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def unramified(cls, p: int, value: complex = 1.0) -> "LocalCharacter":
        return cls(p, complex(value), 0, np.ones(1, dtype=np.complex128))

    @classmethod
    def ramified(cls, p: int, conductor: int, index: int = 1, value: complex = 1.0) -> "LocalCharacter":
        """A character of exact conductor p^conductor, selected by ``index``.

        Odd p: chi(g^j) = e(index j / phi(p^c)) for a primitive root g; the
        conductor is exact when p does not divide index (c >= 2) or
        (p - 1) does not divide index (c = 1).
        p = 2: u = (-1)^e 5^j mod 2^c gives chi(u) = (-1)^e e(index j / 2^(c-2)).
        """
        if conductor == 0:
            return cls.unramified(p, value)
        M = p ** conductor
        table = np.zeros(M, dtype=np.complex128)
        if p == 2:
            if conductor == 1:
                raise ValueError("Q_2 has no character of conductor 2")
            span = max(1, 2 ** (conductor - 2))
            for e in (0, 1):
                x = 1 if e == 0 else M - 1
                for j in range(span):
                    table[x % M] = (-1) ** e * cmath.exp(2j * math.pi * index * j / span) if conductor > 2 else (-1) ** e
                    x = x * 5 % M
        else:
            g = _primitive_root(p, conductor)
            phi = (p - 1) * p ** (conductor - 1)
            x = 1
            for j in range(phi):
                table[x] = cmath.exp(2j * math.pi * index * j / phi)
                x = x * g % M
        chi = cls(p, complex(value), conductor, table)
        if chi.exact_conductor() != conductor:
            raise ValueError(f"index {index} does not give exact conductor {conductor}")
        return chi

    @property
    def is_unramified(self) -> bool:
        return self.conductor_exponent == 0

    def unit_value(self, u: np.ndarray | int) -> np.ndarray:
        """chi on units given as residues mod any p^m with m >= conductor."""
        return self.unit_table[np.asarray(u) % (self.p ** self.conductor_exponent)]

    def __call__(self, valuation: np.ndarray | int, unit: np.ndarray | int) -> np.ndarray:
        return self.value_at_uniformizer ** np.asarray(valuation) * self.unit_value(unit)

    def inverse(self) -> "LocalCharacter":
        table = np.where(self.unit_table != 0, 1 / np.where(self.unit_table != 0, self.unit_table, 1), 0)
        return LocalCharacter(self.p, 1 / self.value_at_uniformizer, self.conductor_exponent, table)

    def is_multiplicative(self, tol: float = 1e-12) -> bool:
        M = self.p ** self.conductor_exponent
        units = np.array([u for u in range(M) if u % self.p], dtype=np.int64) if M > 1 else np.zeros(1, dtype=np.int64)
        x, y = np.meshgrid(units, units)
        lhs = self.unit_table[(x * y) % M] if M > 1 else self.unit_table[np.zeros_like(x)]
        rhs = self.unit_table[x % M] * self.unit_table[y % M] if M > 1 else lhs
        return bool(np.max(np.abs(lhs - rhs)) < tol)

    def exact_conductor(self, tol: float = 1e-12) -> int:
        """Least c with chi trivial on 1 + p^c Z_p (c >= 1), or 0 if chi is trivial on units."""
        c = self.conductor_exponent
        if c == 0:
            return 0
        M = self.p ** c
        units = np.array([u for u in range(M) if u % self.p], dtype=np.int64)
        if np.max(np.abs(self.unit_table[units] - 1)) < tol:
            return 0
        for j in range(1, c + 1):
            sub = np.arange(1, M, self.p ** j)
            if np.max(np.abs(self.unit_table[sub % M] - 1)) < tol:
                return j
        return c


@dataclass(frozen=True)
class CharacterPair:
    """Inducing data (chi_1, chi_2) of pi(chi_1, chi_2)."""

    chi1: LocalCharacter
    chi2: LocalCharacter

    @property
    def p(self) -> int:
        return self.chi1.p

    @property
    def max_conductor(self) -> int:
        return max(self.chi1.conductor_exponent, self.chi2.conductor_exponent)

    @property
    def central_at_uniformizer(self) -> complex:
        return self.chi1.value_at_uniformizer * self.chi2.value_at_uniformizer

    @property
    def alpha0(self) -> complex:
        """omega(p) for central character omega^{-1} = chi_1 chi_2."""
        return 1 / self.central_at_uniformizer

    @property
    def unramified(self) -> bool:
        return self.chi1.is_unramified and self.chi2.is_unramified

    @property
    def satake(self) -> tuple[complex, complex]:
        return (self.chi1.value_at_uniformizer, self.chi2.value_at_uniformizer)

    def contragredient(self) -> "CharacterPair":
        return CharacterPair(self.chi1.inverse(), self.chi2.inverse())

    @classmethod
    def spherical(cls, p: int, alpha1: complex, alpha2: complex) -> "CharacterPair":
        return cls(LocalCharacter.unramified(p, alpha1), LocalCharacter.unramified(p, alpha2))


__all__ = ["CharacterPair", "LocalCharacter"]
