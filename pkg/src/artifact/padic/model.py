"""Finite models GL2(Z/p^m) and exact Iwasawa decomposition over Q.

An element of GL2(Z/p^m) is stored as four int64 residues; the code
((a M + b) M + c) M + d with M = p^m indexes a dense lookup table.

Vectors of an induced representation that are right-invariant under the
principal congruence subgroup of level p^m are determined by their values on
the representatives of B(Z_p)\\K, which are indexed by P^1(Z/p^m):

    label t in [0, M)          <->  [[1, 0], [t, 1]]
    label M + s, s in [0, M/p) <->  [[0, 1], [1, p s]]

These are exactly the compact parts produced by ``kernels.iwasawa_table``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from .. import kernels

MAX_TABLE = 40_000_000


def valuation(x: int | Fraction, p: int) -> int | float:
    """p-adic valuation of a rational; +inf for 0."""
    if x == 0:
        return float("inf")
    x = Fraction(x)
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def unit_part_mod(x: Fraction, p: int, M: int) -> int:
    """x / p^v(x) reduced mod M (x nonzero)."""
    v = valuation(x, p)
    y = Fraction(x) / Fraction(p) ** v
    return y.numerator * pow(y.denominator, -1, M) % M


# exact rational matrices ----------------------------------------------------

@dataclass(frozen=True)
class PAdicMatrix:
    """2x2 matrix with rational entries, viewed in GL2(Q_p)."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    p: int

    @classmethod
    def of(cls, a, b, c, d, p: int) -> "PAdicMatrix":
        return cls(Fraction(a), Fraction(b), Fraction(c), Fraction(d), p)

    @classmethod
    def identity(cls, p: int) -> "PAdicMatrix":
        return cls.of(1, 0, 0, 1, p)

    @classmethod
    def torus(cls, y, p: int) -> "PAdicMatrix":
        """a(y) = diag(y, 1)."""
        return cls.of(y, 0, 0, 1, p)

    @classmethod
    def upper_unipotent(cls, x, p: int) -> "PAdicMatrix":
        return cls.of(1, x, 0, 1, p)

    @classmethod
    def lower_unipotent(cls, x, p: int) -> "PAdicMatrix":
        return cls.of(1, 0, x, 1, p)

    @classmethod
    def weyl(cls, p: int) -> "PAdicMatrix":
        return cls.of(0, 1, 1, 0, p)

    @property
    def entries(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    @property
    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "PAdicMatrix") -> "PAdicMatrix":
        return PAdicMatrix(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            self.p,
        )

    def scale(self, s) -> "PAdicMatrix":
        s = Fraction(s)
        return PAdicMatrix(self.a * s, self.b * s, self.c * s, self.d * s, self.p)

    def valuations(self) -> tuple:
        return tuple(valuation(x, self.p) for x in self.entries)

    @property
    def det_valuation(self) -> int:
        return int(valuation(self.det, self.p))

    def is_integral(self) -> bool:
        return all(v >= 0 for v in self.valuations())

    def in_maximal_compact(self) -> bool:
        return self.is_integral() and self.det != 0 and self.det_valuation == 0

    def is_upper_triangular(self) -> bool:
        return self.c == 0

    def reduce(self, M: int) -> tuple[int, int, int, int]:
        """Entries reduced mod M (entries must be p-integral)."""
        if not self.is_integral():
            raise ValueError("reduction needs p-integral entries")
        return tuple(x.numerator * pow(x.denominator, -1, M) % M for x in self.entries)


def iwasawa_decompose(g: PAdicMatrix) -> tuple[PAdicMatrix, PAdicMatrix]:
    """g = b k with b upper triangular and k in GL2(Z_p), exactly over Q.

    Elements already in GL2(Z_p) return (1, g).  Otherwise, if
    v(c) >= v(d) the lower-left entry is cleared through the (2,2) entry,
    k = [[1, 0], [c/d, 1]]; else through the (2,1) entry composed with the Weyl
    element, k = [[0, 1], [1, d/c]].
    """
    p = g.p
    if g.det == 0:
        raise ValueError("singular matrix has no Iwasawa decomposition")
    if g.in_maximal_compact():
        return PAdicMatrix.identity(p), g
    vc, vd = valuation(g.c, p), valuation(g.d, p)
    if vc >= vd:
        t = g.c / g.d
        k = PAdicMatrix.of(1, 0, t, 1, p)
        b = PAdicMatrix.of(g.det / g.d, g.b, 0, g.d, p)
    else:
        t = g.d / g.c
        k = PAdicMatrix.of(0, 1, 1, t, p)
        b = PAdicMatrix.of(-g.det / g.c, g.a, 0, g.c, p)
    return b, k


# the finite group ---------------------------------------------------------------

def _inverse_table(p: int, M: int) -> np.ndarray:
    inv = np.zeros(M, dtype=np.int64)
    for r in range(M):
        if r % p:
            inv[r] = pow(r, -1, M)
    return inv


def p1_labels(C: np.ndarray, D: np.ndarray, p: int, j: int) -> np.ndarray:
    """Label in P^1(Z/p^j) of the bottom row (C : D) of elements of GL2(Z_p)."""
    Mj = p ** j
    if j == 0:
        return np.zeros(np.shape(C), dtype=np.int64)
    C = np.asarray(C, dtype=np.int64) % Mj
    D = np.asarray(D, dtype=np.int64) % Mj
    inv = _inverse_table(p, Mj)
    d_unit = (D % p) != 0
    out = np.empty(C.shape, dtype=np.int64)
    out[d_unit] = C[d_unit] * inv[D[d_unit]] % Mj
    cu = ~d_unit
    out[cu] = Mj + (D[cu] * inv[C[cu]] % Mj) // p
    return out


class FiniteModel:
    """GL2(Z/p^m) with lookup tables, Haar weights and coset labels."""

    def __init__(self, p: int, m: int):
        if p < 2 or any(p % r == 0 for r in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"p={p} is not prime")
        if m < 1:
            raise ValueError("level exponent m must be at least 1")
        M = p ** m
        if M ** 4 > MAX_TABLE:
            raise ValueError(f"GL2(Z/{M}) is too large for a dense table")
        self.p = p
        self.m = m
        self.M = M
        r = np.arange(M, dtype=np.int64)
        A, B, C, D = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
        keep = ((A * D - B * C) % p) != 0
        self.A, self.B, self.C, self.D = A[keep], B[keep], C[keep], D[keep]
        self.size = int(self.A.size)
        self.lookup = np.full(M ** 4, -1, dtype=np.int64)
        self.lookup[self.codes(self.A, self.B, self.C, self.D)] = np.arange(self.size)
        self.haar_weight = 1.0 / self.size
        self.identity_index = int(self.index(1, 0, 0, 1))
        self.n_p1 = M + M // p
        k11, k12, k21, k22, v11, v22, u11, u22 = kernels.iwasawa_table(self.A, self.B, self.C, self.D, p, m)
        if np.any(v11) or np.any(v22):
            raise ArithmeticError("elements of K must have unit triangular part")
        self.label = self._label_of(k11, k21, k22)
        self.u11 = u11
        self.u22 = u22

    # encoding ----------------------------------------------------------------
    def codes(self, A, B, C, D) -> np.ndarray:
        M = self.M
        return ((np.asarray(A) % M * M + np.asarray(B) % M) * M + np.asarray(C) % M) * M + np.asarray(D) % M

    def index(self, A, B, C, D) -> np.ndarray:
        idx = self.lookup[self.codes(A, B, C, D)]
        if np.any(idx < 0):
            raise ValueError("matrix is not invertible mod p")
        return idx

    def element(self, i: int) -> tuple[int, int, int, int]:
        return (int(self.A[i]), int(self.B[i]), int(self.C[i]), int(self.D[i]))

    def _label_of(self, k11, k21, k22) -> np.ndarray:
        M, p = self.M, self.p
        return np.where(k11 == 1, k21 % M, M + (k22 % M) // p)

    # representatives of B(Z_p)\K -------------------------------------------------
    @cached_property
    def rep_matrices(self) -> np.ndarray:
        """n_p1 x 4 integer array of representatives in [0, M)."""
        M, p = self.M, self.p
        reps = np.zeros((self.n_p1, 4), dtype=np.int64)
        t = np.arange(M)
        reps[:M] = np.stack([np.ones(M), np.zeros(M), t, np.ones(M)], axis=1)
        s = np.arange(M // p)
        reps[M:] = np.stack([np.zeros(M // p), np.ones(M // p), np.ones(M // p), (p * s) % M], axis=1)
        return reps

    @cached_property
    def rep_indices(self) -> np.ndarray:
        r = self.rep_matrices
        return self.index(r[:, 0], r[:, 1], r[:, 2], r[:, 3])

    # group operations ---------------------------------------------------------
    def multiply(self, left: tuple, right: tuple) -> tuple:
        """Entrywise product of (A, B, C, D) arrays or scalars, reduced mod M."""
        a1, b1, c1, d1 = left
        a2, b2, c2, d2 = right
        M = self.M
        return ((a1 * a2 + b1 * c2) % M, (a1 * b2 + b1 * d2) % M, (c1 * a2 + d1 * c2) % M, (c1 * b2 + d1 * d2) % M)

    def all_elements(self) -> tuple:
        return (self.A, self.B, self.C, self.D)

    def subset(self, mask: np.ndarray) -> tuple:
        return (self.A[mask], self.B[mask], self.C[mask], self.D[mask])

    # congruence subgroups -------------------------------------------------------
    def k0_mask(self, j: int) -> np.ndarray:
        """Elements of K_0[p^j]: lower-left entry divisible by p^j."""
        self._check_j(j)
        return (self.C % (self.p ** j)) == 0

    def k1_mask(self, j: int) -> np.ndarray:
        """Elements of K_1[p^j]: lower row congruent to (0, 1) mod p^j."""
        self._check_j(j)
        pj = self.p ** j
        return ((self.C % pj) == 0) & ((self.D - 1) % pj == 0)

    def principal_mask(self, j: int) -> np.ndarray:
        """Elements congruent to the identity mod p^j."""
        self._check_j(j)
        pj = self.p ** j
        return ((self.A - 1) % pj == 0) & (self.B % pj == 0) & (self.C % pj == 0) & ((self.D - 1) % pj == 0)

    def _check_j(self, j: int) -> None:
        if not 0 <= j <= self.m:
            raise ValueError(f"j={j} outside 0..{self.m}")

    def k0_coset_labels(self, j: int) -> np.ndarray:
        """Label of the coset K_0[p^j] g: the point (c : d) of P^1(Z/p^j)."""
        self._check_j(j)
        return p1_labels(self.C, self.D, self.p, j)

    def k1_coset_labels(self, j: int) -> np.ndarray:
        """Label of the coset g K_1[p^j]: the bottom row of g^{-1} mod p^j, up to det."""
        self._check_j(j)
        pj = self.p ** j
        det = (self.A * self.D - self.B * self.C) % pj
        inv = _inverse_table(self.p, pj) if pj > 1 else np.zeros(1, dtype=np.int64)
        dinv = inv[det] if pj > 1 else np.zeros_like(det)
        x = (-self.C * dinv) % pj
        y = (self.A * dinv) % pj
        return x * pj + y

    def index_K0(self, j: int) -> int:
        """[K : K_0[p^j]] counted by enumeration."""
        return self.size // int(self.k0_mask(j).sum())

    def expected_size(self) -> int:
        p, m = self.p, self.m
        return p ** (4 * m - 3) * (p - 1) * (p * p - 1)

    def volume_K0(self, j: int) -> float:
        return float(self.k0_mask(j).sum()) / self.size

    # generators ---------------------------------------------------------------
    @cached_property
    def unit_generators(self) -> list[int]:
        """Generators of (Z/M)^x."""
        M, p = self.M, self.p
        if p == 2:
            return [g for g in (M - 1, 5 % M) if g not in (0, 1)] or [1]
        for g in range(2, M):
            if g % p == 0:
                continue
            order, x = 1, g
            while x != 1:
                x = x * g % M
                order += 1
            if order == (p - 1) * M // p:
                return [g]
        return [1]

    @cached_property
    def generators(self) -> list[tuple[int, int, int, int]]:
        """Generators of GL2(Z/M): elementary unipotents and diagonal units."""
        gens = [(1, 1, 0, 1), (1, 0, 1, 1)]
        for g in self.unit_generators:
            gens.append((g, 0, 0, 1))
            gens.append((1, 0, 0, g))
        return gens

    @cached_property
    def borel_generators(self) -> list[tuple[int, int, int, int]]:
        gens = [(1, 1, 0, 1)]
        for g in self.unit_generators:
            gens.append((g, 0, 0, 1))
            gens.append((1, 0, 0, g))
        return gens

    def borel_elements(self) -> tuple:
        return self.subset(self.C == 0)


__all__ = [
    "FiniteModel",
    "PAdicMatrix",
    "iwasawa_decompose",
    "p1_labels",
    "unit_part_mod",
    "valuation",
]
