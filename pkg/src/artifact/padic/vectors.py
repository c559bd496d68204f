"""Vectors of pi(chi_1, chi_2) on a finite model and the operators acting on them.

A vector f satisfies f(b g) = chi_1(a) chi_2(d) |a/d|^{1/2} f(g) for upper
triangular b = [[a, x], [0, d]].  On K it is determined by its values at the
P^1 representatives (``coords``); ``values`` synthesises the function on every
element of GL2(Z/p^m).

Operators are matrices acting on coords:
  * right translation by a(p^t) or by an element of K,
  * averages over K_0[p^j] and K_1[p^j] (P_j and its K_1 analogue),
  * T_0(n) = P_0 R(a(p^n)) P_0, the double average over K a(p^n) K.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from .characters import CharacterPair
from .model import FiniteModel


class LevelError(ValueError):
    """The finite model's level is too small for the requested vector or operator."""

    def __init__(self, needed: int, have: int, what: str):
        super().__init__(f"{what} needs level m >= {needed}, model has m = {have}")
        self.needed = needed


def required_level(n: int, conductor: int) -> int:
    """Level that holds a(p^{+-n}) applied to a vector of level ``conductor``."""
    return n + conductor


@dataclass
class InducedVector:
    model: FiniteModel
    characters: CharacterPair
    coords: np.ndarray
    level: int
    _values: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def values(self) -> np.ndarray:
        """f on every element of GL2(Z/p^m), via f(b k) = chi_1(u11) chi_2(u22) f(k)."""
        if self._values is None:
            self._values = element_factors(self.model, self.characters) * self.coords[self.model.label]
        return self._values

    def __add__(self, o: "InducedVector") -> "InducedVector":
        return self._new(self.coords + o.coords, max(self.level, o.level))

    def __sub__(self, o: "InducedVector") -> "InducedVector":
        return self._new(self.coords - o.coords, max(self.level, o.level))

    def __mul__(self, s: complex) -> "InducedVector":
        return self._new(self.coords * s, self.level)

    __rmul__ = __mul__

    def _new(self, coords: np.ndarray, level: int) -> "InducedVector":
        return InducedVector(self.model, self.characters, coords, level)

    def inner(self, o: "InducedVector") -> complex:
        """Haar-normalised <f, g> = int_K f conj(g); every B\\K class has mass 1/|P^1|."""
        return complex(np.vdot(o.coords, self.coords) / self.model.n_p1)

    def inner_full(self, o: "InducedVector") -> complex:
        """The same inner product as a weighted sum over all group elements."""
        return complex(np.sum(self.values * np.conj(o.values)) * self.model.haar_weight)

    def norm(self) -> float:
        return float(np.sqrt(max(self.inner(self).real, 0.0)))


_FACTORS: dict = {}


def _char_key(chars: CharacterPair) -> tuple:
    return (
        chars.chi1.conductor_exponent,
        chars.chi1.unit_table.tobytes(),
        chars.chi2.conductor_exponent,
        chars.chi2.unit_table.tobytes(),
    )


def element_factors(model: FiniteModel, chars: CharacterPair) -> np.ndarray:
    """chi_1(u11) chi_2(u22) for the Iwasawa unit parts of every element of K."""
    key = (id(model), _char_key(chars))
    hit = _FACTORS.get(key)
    if hit is None:
        hit = chars.chi1.unit_value(model.u11) * chars.chi2.unit_value(model.u22)
        _FACTORS[key] = hit
    return hit


def check_characters(model: FiniteModel, chars: CharacterPair) -> None:
    if chars.p != model.p:
        raise ValueError("characters and model have different primes")
    if chars.max_conductor > model.m:
        raise LevelError(chars.max_conductor, model.m, "the inducing characters")


# constructors -------------------------------------------------------------------

def from_coords(model: FiniteModel, chars: CharacterPair, coords, level: int | None = None) -> InducedVector:
    check_characters(model, chars)
    coords = np.asarray(coords, dtype=np.complex128)
    if coords.shape != (model.n_p1,):
        raise ValueError("coords must have one entry per point of P^1(Z/p^m)")
    return InducedVector(model, chars, coords, model.m if level is None else level)


def random_vector(model: FiniteModel, chars: CharacterPair, rng: np.random.Generator) -> InducedVector:
    """A random vector of full level m (generic coordinates)."""
    z = rng.standard_normal(model.n_p1) + 1j * rng.standard_normal(model.n_p1)
    return from_coords(model, chars, z, model.m)


def spherical_vector(model: FiniteModel, chars: CharacterPair) -> InducedVector:
    """The K-fixed vector with value 1 on K (unramified characters only)."""
    if not chars.unramified:
        raise ValueError("the spherical vector needs unramified characters")
    return from_coords(model, chars, np.ones(model.n_p1), 0)


def D_vector(model: FiniteModel, chars: CharacterPair, k: int) -> InducedVector:
    """D_k: supported on K_0[p^{c+k}], right K_1[p^{c+k}]-invariant, Vol^{-1/2} at 1.

    c is the conductor of chi_2 and chi_1 must be unramified; on K_0[p^{c+k}]
    the vector equals chi_2(d) Vol(K_0[p^{c+k}])^{-1/2}.
    """
    if not chars.chi1.is_unramified:
        raise ValueError("D_k is defined for pi(chi_1, chi_2) with chi_1 unramified")
    c = chars.chi2.conductor_exponent
    lvl = c + k
    if lvl > model.m:
        raise LevelError(lvl, model.m, f"D_{k}")
    M, p = model.M, model.p
    vol = 1.0 / ((p + 1) * p ** (lvl - 1)) if lvl > 0 else 1.0
    coords = np.zeros(model.n_p1, dtype=np.complex128)
    t = np.arange(M)
    # representative [[1, 0], [t, 1]] lies in K_0[p^lvl] iff p^lvl | t
    coords[:M][t % (p ** lvl) == 0] = vol ** -0.5
    if lvl == 0:
        # the Weyl-type representatives lie in K_0[p^0] = K only
        coords[M:] = 1.0
    return from_coords(model, chars, coords, lvl)


# operators -----------------------------------------------------------------------

def _rows_from_products(model: FiniteModel, chars: CharacterPair, prods: tuple, rows: np.ndarray, weight: float) -> np.ndarray:
    """Accumulate factor(g) at (row, label(g)) for products g in K, scaled by weight."""
    idx = model.index(*prods)
    fac = element_factors(model, chars)[idx]
    lab = model.label[idx]
    n = model.n_p1
    flat = rows * n + lab
    re = np.bincount(flat, weights=fac.real, minlength=n * n)
    im = np.bincount(flat, weights=fac.imag, minlength=n * n)
    return (re + 1j * im).reshape(n, n) * weight


def right_K_matrix(model: FiniteModel, chars: CharacterPair, kappa: tuple[int, int, int, int]) -> np.ndarray:
    """Matrix of R(kappa): (R f)(x) = f(x kappa) on coords, kappa in GL2(Z/p^m)."""
    check_characters(model, chars)
    reps = model.rep_matrices
    prods = model.multiply((reps[:, 0], reps[:, 1], reps[:, 2], reps[:, 3]), tuple(np.int64(v) for v in kappa))
    return _rows_from_products(model, chars, prods, np.arange(model.n_p1), 1.0)


def _average_matrix(model: FiniteModel, chars: CharacterPair, mask: np.ndarray) -> np.ndarray:
    """Matrix of f -> mean over the subgroup {mask} of R(k) f."""
    check_characters(model, chars)
    sub = model.subset(mask)
    size = sub[0].size
    n = model.n_p1
    out = np.zeros((n, n), dtype=np.complex128)
    reps = model.rep_matrices
    for i in range(n):
        prods = model.multiply(tuple(np.int64(v) for v in reps[i]), sub)
        out += _rows_from_products(model, chars, prods, np.full(size, i), 1.0 / size)
    return out


_AVG: dict = {}


def projection_matrix(model: FiniteModel, chars: CharacterPair, j: int) -> np.ndarray:
    """P_j: average over K_0[p^j] (orthogonal projection onto K_0[p^j]-invariants)."""
    key = ("K0", id(model), _char_key(chars), j)
    if key not in _AVG:
        _AVG[key] = _average_matrix(model, chars, model.k0_mask(j))
    return _AVG[key]


def k1_average_matrix(model: FiniteModel, chars: CharacterPair, j: int) -> np.ndarray:
    """Average over K_1[p^j] (projection onto K_1[p^j]-invariants)."""
    key = ("K1", id(model), _char_key(chars), j)
    if key not in _AVG:
        _AVG[key] = _average_matrix(model, chars, model.k1_mask(j))
    return _AVG[key]


def torus_matrix(model: FiniteModel, chars: CharacterPair, t: int, lift: np.ndarray | None = None) -> np.ndarray:
    """Matrix of R(a(p^t)) on vectors whose level plus |t| is at most m.

    For t < 0 use a(p^t) = z(p^t) diag(1, p^{-t}); the centre acts by
    (chi_1 chi_2)(p)^t.  Each representative times the integral matrix is
    decomposed by the Iwasawa kernel.  ``lift`` optionally adds multiples of
    p^m to the representatives (used to test independence of the lift).
    """
    check_characters(model, chars)
    reps = model.rep_matrices.copy()
    if lift is not None:
        reps = reps + model.M * lift
    if t >= 0:
        g = (model.p ** t, 0, 0, 1)
        central = 1.0
    else:
        g = (1, 0, 0, model.p ** (-t))
        central = chars.central_at_uniformizer ** t
    A = reps[:, 0] * g[0] + reps[:, 1] * g[2]
    B = reps[:, 0] * g[1] + reps[:, 1] * g[3]
    C = reps[:, 2] * g[0] + reps[:, 3] * g[2]
    D = reps[:, 2] * g[1] + reps[:, 3] * g[3]
    k11, k12, k21, k22, v11, v22, u11, u22 = kernels.iwasawa_table(A, B, C, D, model.p, model.m)
    a1, a2 = chars.satake
    fac = (
        a1 ** v11.astype(np.float64)
        * a2 ** v22.astype(np.float64)
        * float(model.p) ** (-(v11 - v22) / 2.0)
        * chars.chi1.unit_value(u11)
        * chars.chi2.unit_value(u22)
        * central
    )
    lab = np.where(k11 % model.M == 1, k21 % model.M, model.M + (k22 % model.M) // model.p)
    n = model.n_p1
    out = np.zeros((n, n), dtype=np.complex128)
    out[np.arange(n), lab] = fac
    return out


def translate(f: InducedVector, t: int) -> InducedVector:
    """R(a(p^t)) f; a(p^{-n}) e_0 is translate(e_0, -n)."""
    need = f.level + abs(t)
    if need > f.model.m:
        raise LevelError(need, f.model.m, f"a(p^{t}) on a level-{f.level} vector")
    return f._new(torus_matrix(f.model, f.characters, t) @ f.coords, need)


def project_K0(f: InducedVector, j: int) -> InducedVector:
    """P_j f, the average of R(k) f over k in K_0[p^j]."""
    return f._new(projection_matrix(f.model, f.characters, j) @ f.coords, min(f.level, j))


def hecke_matrix(model: FiniteModel, chars: CharacterPair, n: int) -> np.ndarray:
    """T_0(n) = int int R(k1 a(p^n) k2) dk1 dk2 = P_0 R(a(p^n)) P_0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > model.m:
        raise LevelError(n, model.m, f"T_0({n})")
    P0 = projection_matrix(model, chars, 0)
    return P0 @ torus_matrix(model, chars, n) @ P0


def hecke_T0(n: int, f: InducedVector) -> InducedVector:
    return f._new(hecke_matrix(f.model, f.characters, n) @ f.coords, 0)


def hecke_double_average(f: InducedVector, n: int, x: tuple[int, int, int, int] = (1, 0, 0, 1)) -> complex:
    """(T_0(n) f)(x) as the literal mean over (k1, k2) in K x K of f(x k1 a(p^n) k2).

    Costs |K|^2 Iwasawa decompositions; meant for the smallest models.
    """
    model, chars = f.model, f.characters
    vals = f.values
    A, B, C, D = model.all_elements()
    xk1 = model.multiply(tuple(np.int64(v) for v in x), (A, B, C, D))
    pn = model.p ** n
    a1, a2 = chars.satake
    total = 0j
    for i in range(model.size):
        # y = x k1 a(p^n), integral
        ya, yb, yc, yd = xk1[0][i] * pn, xk1[1][i], xk1[2][i] * pn, xk1[3][i]
        P = ya * A + yb * C
        Q = ya * B + yb * D
        R = yc * A + yd * C
        S = yc * B + yd * D
        k11, k12, k21, k22, v11, v22, u11, u22 = kernels.iwasawa_table(P, Q, R, S, model.p, model.m)
        kidx = model.index(k11, k12, k21, k22)
        fac = (
            a1 ** v11.astype(np.float64)
            * a2 ** v22.astype(np.float64)
            * float(model.p) ** (-(v11 - v22) / 2.0)
            * chars.chi1.unit_value(u11)
            * chars.chi2.unit_value(u22)
        )
        total += complex(np.sum(fac * vals[kidx]))
    return total / model.size ** 2


# spans and ranks -------------------------------------------------------------

def orthonormal_basis(vectors: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the span of the columns of ``vectors``."""
    if vectors.size == 0:
        return vectors
    u, s, _ = np.linalg.svd(vectors, full_matrices=False)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    return u[:, :rank]


def k_span_dimension(f: InducedVector, tol: float = 1e-9) -> int:
    """Dimension of the K-representation generated by f (Krylov closure under generators)."""
    model, chars = f.model, f.characters
    gens = [right_K_matrix(model, chars, g) for g in model.generators]
    basis = orthonormal_basis(f.coords[:, None], tol)
    while True:
        grown = np.hstack([basis] + [g @ basis for g in gens])
        new = orthonormal_basis(grown, tol)
        if new.shape[1] == basis.shape[1]:
            return int(new.shape[1])
        basis = new


def equivariance_residual(f: InducedVector, exhaustive: bool = False) -> float:
    """max |f(b k) - chi_1(a) chi_2(d) f(k)| over b (generators, or all of B(Z/p^m)) and all k."""
    model, chars = f.model, f.characters
    vals = f.values
    if exhaustive:
        Bs = model.borel_elements()
        blist = list(zip(*(x.tolist() for x in Bs)))
    else:
        blist = model.borel_generators
    worst = 0.0
    A, B, C, D = model.all_elements()
    for b in blist:
        prod = model.multiply(tuple(np.int64(v) for v in b), (A, B, C, D))
        idx = model.index(*prod)
        scale = chars.chi1.unit_value(b[0]) * chars.chi2.unit_value(b[3])
        worst = max(worst, float(np.max(np.abs(vals[idx] - scale * vals))))
    return worst


__all__ = [
    "InducedVector",
    "LevelError",
    "D_vector",
    "element_factors",
    "equivariance_residual",
    "from_coords",
    "hecke_T0",
    "hecke_double_average",
    "hecke_matrix",
    "k1_average_matrix",
    "k_span_dimension",
    "orthonormal_basis",
    "project_K0",
    "projection_matrix",
    "random_vector",
    "required_level",
    "right_K_matrix",
    "spherical_vector",
    "torus_matrix",
    "translate",
]
