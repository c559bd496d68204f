"""Verification suites for the finite p-adic models.

Each suite returns ``SuiteReport`` objects whose JSON form is
{suite, p, m, case_params, identities: [{name, max_residual, pass}]}.
Integer checks (coset counts, ranks, dimensions) are identities whose residual
is |expected - observed| and must be exactly 0.  Variant forms that fail and
have a corrected counterpart are listed under ``documented_discrepancies``;
they are reported but do not affect the pass status.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import vectors as V
from . import whittaker as W
from .characters import CharacterPair, LocalCharacter
from .model import FiniteModel, PAdicMatrix

TOL = 1e-10
SUITES = ("hecke", "adjoint", "basis", "projection", "integrals")
BRUTE_FORCE_MAX_SIZE = 2000


@dataclass
class SuiteReport:
    suite: str
    p: int
    m: int
    case_params: dict
    identities: list = field(default_factory=list)
    documented_discrepancies: list = field(default_factory=list)

    def check(self, name: str, residual: float, tol: float = TOL) -> None:
        r = float(residual)
        self.identities.append({"name": name, "max_residual": r, "pass": bool(r < tol)})

    def check_int(self, name: str, expected: int, observed: int) -> None:
        self.identities.append({
            "name": name,
            "max_residual": float(abs(int(expected) - int(observed))),
            "pass": int(expected) == int(observed),
            "expected": int(expected),
            "observed": int(observed),
        })

    def discrepancy(self, name: str, residual: float, note: str) -> None:
        self.documented_discrepancies.append({"name": name, "max_residual": float(residual), "note": note})

    @property
    def passed(self) -> bool:
        return all(i["pass"] for i in self.identities)

    @property
    def max_residual(self) -> float:
        return max((i["max_residual"] for i in self.identities), default=0.0)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "p": self.p,
            "m": self.m,
            "case_params": self.case_params,
            "identities": self.identities,
            "documented_discrepancies": self.documented_discrepancies,
        }


def _c(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _unit(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * math.pi * rng.random()))


def _maxabs(x) -> float:
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def _complementary_exponent(rng: np.random.Generator) -> float:
    """a in (0, 7/64]."""
    return float((1 - rng.random()) * 7 / 64)


# Hecke operators ------------------------------------------------------------------

def hecke_coefficients(n: int, q: int, alpha0: complex) -> list[complex]:
    """a_j^{(n)} with T_0(1)^n = sum_j a_j T_0(n - 2j), from the three-term recurrence."""
    if n == 0:
        return [1 + 0j]
    u, v = q / (1 + q), (1 / alpha0) / (1 + q)
    # coefficients indexed by the degree of T_0(k)
    cur = {1: 1 + 0j}
    for _ in range(n - 1):
        nxt: dict[int, complex] = {}
        for k, a in cur.items():
            if k == 0:
                nxt[1] = nxt.get(1, 0) + a
            else:
                nxt[k + 1] = nxt.get(k + 1, 0) + a * u
                nxt[k - 1] = nxt.get(k - 1, 0) + a * v
        cur = nxt
    return [cur.get(n - 2 * j, 0j) for j in range(n // 2 + 1)]


def lambda0(s: complex, q: int, alpha0: complex) -> complex:
    return q ** -0.5 / (1 + 1 / q) * (q ** (-(0.5 + s)) + q ** (0.5 + s) / alpha0)


def lambda0_tilde(s: complex, q: int, alpha0: complex) -> complex:
    return q ** -0.5 / (1 + 1 / q) * (q ** (-(0.5 + s)) / alpha0 + q ** (0.5 + s))


def eigenvalue_T1(model: FiniteModel, chars: CharacterPair) -> tuple[complex, float]:
    """T_0(1) on the spherical vector: the eigenvalue and the non-eigen residual."""
    e0 = V.spherical_vector(model, chars)
    out = V.hecke_T0(1, e0).coords
    lam = complex(out[0])
    return lam, _maxabs(out - lam * e0.coords)


def spherical_eigen_cases(p: int, s: complex, alpha0: complex) -> tuple[CharacterPair, CharacterPair]:
    """pi(|.|^{1/2+s}, omega^{-1}|.|^{-1/2-s}) and pi(omega^{-1}|.|^{1/2+s}, |.|^{-1/2-s}), omega(p) = alpha0."""
    x = p ** (-(0.5 + s))
    plain = CharacterPair.spherical(p, x, 1 / (alpha0 * x))
    tilde = CharacterPair.spherical(p, x / alpha0, 1 / x)
    return plain, tilde


def coset_partition(model: FiniteModel, n: int) -> dict:
    """Counts for K_0[p^n]\\K split into unipotent and Weyl-type representatives."""
    p, M = model.p, model.M
    labels = model.k0_coset_labels(n)
    distinct = np.unique(labels)
    pn = p ** n
    uni = [(1, 0, a, 1) for a in range(pn)]
    wey = [(0, 1, 1, b) for b in range(0, pn, p)]  # [[1,0],[b,1]] w
    reps = uni + wey
    idx = model.index(*(np.array(x) for x in zip(*reps)))
    rep_labels = labels[idx]
    sizes = np.bincount(np.searchsorted(distinct, labels))
    return {
        "cosets": int(distinct.size),
        "unipotent": len(uni),
        "weyl": len(wey),
        "rep_labels_distinct": int(np.unique(rep_labels).size),
        "covers": bool(np.array_equal(np.sort(rep_labels), distinct)),
        "equal_sizes": bool(np.all(sizes == sizes[0])),
    }


def coset_relations_exact(p: int, n: int) -> float:
    """Exact check of the two matrix relations behind the Hecke recurrence; returns 0 or 1."""
    aN = lambda k: PAdicMatrix.torus(Fraction(p) ** k, p)
    w = PAdicMatrix.of(0, 1, 1, 0, p)
    bad = 0
    for a in range(p ** n):
        lhs = aN(n) @ PAdicMatrix.lower_unipotent(a, p) @ aN(1)
        rhs = aN(n + 1) @ PAdicMatrix.lower_unipotent(a * p, p)
        bad |= lhs != rhs
    for b in range(0, p ** n, p):
        lhs = aN(n) @ PAdicMatrix.lower_unipotent(b, p) @ w @ aN(1)
        z_inv = PAdicMatrix.of(Fraction(1, p), 0, 0, Fraction(1, p), p)
        k = aN(-(n - 1)) @ z_inv @ lhs
        bad |= not k.in_maximal_compact()
    return float(bad)


def suite_hecke(model: FiniteModel, rng: np.random.Generator, n_vectors: int = 5) -> list[SuiteReport]:
    p, m, q = model.p, model.m, model.p
    reports = []
    alpha0 = _unit(rng)
    th = _unit(rng)
    # K-averages vanish on ramified data, so the unramified case carries the content
    cases = [("unramified", CharacterPair.spherical(p, th, 1 / (alpha0 * th)))]
    for label, chars in cases:
        a0 = chars.alpha0
        rep = SuiteReport("hecke", p, m, {"case": label, "alpha0": _c(a0), "chi1_at_p": _c(chars.chi1.value_at_uniformizer)})
        T = [V.hecke_matrix(model, chars, n) for n in range(m + 1)]
        X = np.stack([V.random_vector(model, chars, rng).coords for _ in range(n_vectors)], axis=1)
        rep.check("T0(0)T0(1) = T0(1)", _maxabs(T[0] @ T[1] @ X - T[1] @ X))
        rep.check("T0(0) = P_K", _maxabs(T[0] - V.projection_matrix(model, chars, 0)))
        for n in range(1, m):
            lhs = T[n] @ T[1] @ X
            rhs = q / (1 + q) * (T[n + 1] @ X) + (1 / a0) / (1 + q) * (T[n - 1] @ X)
            rep.check(f"recurrence n={n}", _maxabs(lhs - rhs))
        # generating function coefficients up to X^m
        for n in range(1, m):
            coeff = T[n + 1] - (1 + 1 / q) * T[n] @ T[1] + (1 / a0) / q * T[n - 1]
            rep.check(f"generating series X^{n + 1}", _maxabs(coeff @ X))
        rep.check("generating series X^1", _maxabs((T[1] - (1 + 1 / q) * T[0] @ T[1] + T[1] / q) @ X))
        for n in range(1, m + 1):
            a = hecke_coefficients(n, q, a0)
            lhs = np.linalg.matrix_power(T[1], n) @ X
            rhs = sum(a[j] * (T[n - 2 * j] @ X) for j in range(len(a)))
            rep.check(f"T0(1)^{n} expansion", _maxabs(lhs - rhs))
        for n in range(1, 13):
            a = hecke_coefficients(n, q, a0)
            rep.check(f"a_0^({n}) = (q/(1+q))^(n-1)", abs(a[0] - (q / (1 + q)) ** (n - 1)))
            rep.check(f"sum |a_j^({n})| <= 1", max(0.0, sum(abs(x) for x in a) - 1))
        Y = T[1] @ X
        rep.check("T0(1) output is K-invariant", max(
            _maxabs(V.right_K_matrix(model, chars, g) @ Y - Y) for g in model.generators))
        f = V.from_coords(model, chars, Y[:, 0], 0)
        rep.check("T0(1) output equivariant", V.equivariance_residual(f))
        if model.size <= BRUTE_FORCE_MAX_SIZE:
            v = V.from_coords(model, chars, X[:, 0])
            for n in (1, 2):
                if n > m:
                    continue
                out = T[n] @ v.coords
                for x_label in (0, 1, model.M):
                    x = tuple(int(t) for t in model.rep_matrices[x_label])
                    brute = V.hecke_double_average(v, n, x)
                    rep.check(f"T0({n}) brute-force double average at rep {x_label}", abs(brute - out[x_label]))
        reports.append(rep)

    part = SuiteReport("hecke", p, m, {"case": "coset partition"})
    for n in range(1, m + 1):
        c = coset_partition(model, n)
        part.check_int(f"|K_0[p^{n}]\\K|", p ** n + p ** (n - 1), c["cosets"])
        part.check_int(f"unipotent cosets n={n}", p ** n, c["unipotent"])
        part.check_int(f"Weyl cosets n={n}", p ** (n - 1), c["weyl"])
        part.check_int(f"representatives distinct n={n}", c["cosets"], c["rep_labels_distinct"])
        part.check_int(f"representatives cover n={n}", 1, int(c["covers"]))
        part.check_int(f"equal coset sizes n={n}", 1, int(c["equal_sizes"]))
        part.check_int(f"[K:K_0[p^{n}]] by enumeration", (p + 1) * p ** (n - 1), model.index_K0(n))
        part.check(f"coset matrix relations n={n}", coset_relations_exact(p, n))
    part.check_int("|GL2(Z/p^m)|", model.expected_size(), model.size)
    reports.append(part)

    eig = SuiteReport("hecke", p, m, {"case": "spherical eigenvalues"})
    for a0 in (1 + 0j, 1j, _unit(rng)):
        for s in (0.0, 0.3, 0.7j):
            plain, tilde = spherical_eigen_cases(p, s, a0)
            lam, res = eigenvalue_T1(model, plain)
            eig.check(f"lambda_0(s={s}) alpha0={a0:.3f}", abs(lam - lambda0(s, q, a0)))
            eig.check(f"spherical is eigen (plain) s={s}", res)
            lam, res = eigenvalue_T1(model, tilde)
            eig.check(f"tilde lambda_0(s={s}) alpha0={a0:.3f}", abs(lam - lambda0_tilde(s, q, a0)))
            eig.check(f"spherical is eigen (tilde) s={s}", res)
    eig.check("lambda_0(0) = 1 at alpha0 = 1", abs(lambda0(0.0, q, 1.0) - 1))
    reports.append(eig)
    return reports


# adjoint and dual ------------------------------------------------------------------

def _pair(model: FiniteModel, x: np.ndarray, y: np.ndarray) -> complex:
    """<x, y> = int_K x conj(y)."""
    return complex(np.vdot(y, x) / model.n_p1)


def _bilinear(model: FiniteModel, x: np.ndarray, y: np.ndarray) -> complex:
    """int_K x y for x in the contragredient."""
    return complex(np.sum(x * y) / model.n_p1)


def suite_adjoint(model: FiniteModel, rng: np.random.Generator, n_pairs: int = 5) -> list[SuiteReport]:
    p, m = model.p, model.m
    reports = []
    for a0 in (1 + 0j, 1j, _unit(rng)):
        th = _unit(rng)
        chars = CharacterPair.spherical(p, th, 1 / (a0 * th))
        dual = chars.contragredient()
        rep = SuiteReport("adjoint", p, m, {"alpha0": _c(a0), "chi1_at_p": _c(th)})
        for n in range(0, m + 1):
            T = V.hecke_matrix(model, chars, n)
            Td = V.hecke_matrix(model, dual, n)
            adj, variant, bil = 0.0, 0.0, 0.0
            for _ in range(n_pairs):
                f1 = V.random_vector(model, chars, rng).coords
                f2 = V.random_vector(model, chars, rng).coords
                g1 = V.random_vector(model, dual, rng).coords
                lhs = _pair(model, f1, T @ f2)
                adj = max(adj, abs(lhs - _pair(model, np.conj(a0) ** (-n) * (T @ f1), f2)))
                variant = max(variant, abs(lhs - _pair(model, a0 ** (-n) * (T @ f1), f2)))
                bil = max(bil, abs(_bilinear(model, g1, T @ f2) - _bilinear(model, a0 ** (-n) * (Td @ g1), f2)))
            rep.check(f"adjoint T0({n})* = conj(alpha0)^-n T0({n})", adj)
            rep.check(f"dual T0({n})^v = alpha0^-n T0({n})", bil)
            if abs(a0 ** (2 * n) - 1) < 1e-14:
                rep.check(f"adjoint variant alpha0^-n form n={n}", variant)
            else:
                rep.discrepancy(f"adjoint variant alpha0^-n form n={n}", variant,
                                "holds when alpha0^(2n) = 1; the Hermitian adjoint carries conj(alpha0)^-n")
        reports.append(rep)
    return reports


# basis relations -----------------------------------------------------------------

def _gram_schmidt(model: FiniteModel, cols: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for v in cols:
        w = v.astype(np.complex128).copy()
        for e in out:
            w = w - _pair(model, w, e) * e
        out.append(w / math.sqrt(_pair(model, w, w).real))
    return out


def _phase_residual(model: FiniteModel, x: np.ndarray, y: np.ndarray) -> float:
    """min over unimodular c of max |x - c y| (x, y unit vectors)."""
    c = _pair(model, x, y)
    return max(_maxabs(x - c / abs(c) * y), abs(abs(c) - 1))


def c_normalizers(q: int, a1: complex, a2: complex, variant: bool = False) -> tuple[float, float]:
    s = abs(a1 + a2) ** 2
    c1 = 1 - s / q / (1 + 1 / q) ** 2
    lin = (1 / q - q ** -2 - q ** -3) if variant else (1 / q - q ** -3)
    c = 1 - q ** -2 - lin / (1 + 1 / q) ** 2 * s
    return c1, c


def _spherical_basis(model: FiniteModel, rng: np.random.Generator, rep: SuiteReport, tempered: bool) -> None:
    p, m, q = model.p, model.m, model.p
    if tempered:
        a1, a2 = _unit(rng), _unit(rng)
    else:
        a = _complementary_exponent(rng)
        u = _unit(rng)
        a1, a2 = q ** a * u, q ** -a * u
    rep.case_params.update({"alpha1": _c(a1), "alpha2": _c(a2), "tempered": tempered})
    chars = CharacterPair.spherical(p, a1, a2)
    b1, b2 = np.conj(a1), np.conj(a2)
    e0 = V.spherical_vector(model, chars)
    f = [V.translate(e0, -n).coords for n in range(m + 1)]
    D = [V.D_vector(model, chars, k).coords for k in range(m + 1)]
    rep.check("D_0 = e_0", _maxabs(D[0] - e0.coords))
    # basis 1 <-> basis 3
    for n in range(1, m + 1):
        rhs = a2 ** -n * q ** (-n / 2) * D[0]
        for k in range(1, n + 1):
            rhs = rhs + (1 - a1 / a2 / q) / (1 + 1 / q) ** 0.5 * a1 ** -k * a2 ** (k - n) * q ** (-(n - k) / 2) * D[k]
        rep.check(f"a(p^-{n})e_0 in basis 3", _maxabs(f[n] - rhs))
        Dn = a1 ** n * (1 + 1 / q) ** 0.5 / (1 - a1 / a2 / q) * (f[n] - q ** -0.5 / a2 * f[n - 1])
        rep.check(f"D_{n} from basis 1", _maxabs(Dn - D[n]))
    if not tempered:
        return
    for i in range(m + 1):
        for j in range(m + 1):
            lo, hi = min(i, j), max(i, j)
            vol = lambda k: 1.0 if k == 0 else 1.0 / ((q + 1) * q ** (k - 1))
            rep.check(f"<D_{i}, D_{j}>", abs(_pair(model, D[i], D[j]) - math.sqrt(vol(hi) / vol(lo))))
    E = _gram_schmidt(model, f)
    G = np.array([[_pair(model, x, y) for y in E] for x in E])
    rep.check("basis 2 Gram = identity", _maxabs(G - np.eye(len(E))))
    c1, c = c_normalizers(q, a1, a2)
    _, c_variant = c_normalizers(q, a1, a2, variant=True)
    proj = f[1] - _pair(model, f[1], E[0]) * E[0]
    rep.check("c_1 = |a(p^-1)e_0 - projection|^2", abs(_pair(model, proj, proj).real - c1))
    e1 = (f[1] - q ** -0.5 / (1 + 1 / q) * (b1 + b2) * f[0]) / math.sqrt(c1)
    rep.check("e_1 from basis 1", _maxabs(e1 - E[1]))
    rep.check("a(p^-1)e_0 in basis 2", _maxabs(f[1] - (math.sqrt(c1) * E[1] + q ** -0.5 / (1 + 1 / q) * (b1 + b2) * E[0])))
    s1, s2 = q ** -0.5 * (b1 + b2), b1 * b2 / q
    U = lambda k: W.complete_homogeneous(b1, b2, k)
    for n in range(2, m + 1):
        en = f[n] - s1 * f[n - 1] + s2 * f[n - 2]
        rep.check(f"e_{n} from basis 1 (corrected c)", _maxabs(en / math.sqrt(c) - E[n]))
        rep.discrepancy(f"e_{n} from basis 1 (variant c)", _maxabs(en / math.sqrt(c_variant) - E[n]),
                        "variant c has -q^-2 - q^-3 in the |alpha_1 + alpha_2|^2 coefficient; the norm gives q^-1 - q^-3")
        rhs = sum(q ** (-k / 2) * U(k) * math.sqrt(c) * E[n - k] for k in range(n - 1))
        rhs = rhs + q ** (-(n - 1) / 2) * U(n - 1) * math.sqrt(c1) * E[1]
        rhs = rhs + q ** (-n / 2) * (U(n) - (b1 + b2) / (q + 1) * U(n - 1)) * E[0]
        rep.check(f"a(p^-{n})e_0 in basis 2", _maxabs(f[n] - rhs))
    # basis 2 <-> basis 3
    F = [D[0], (1 + 1 / q) ** 0.5 * (D[1] - (q + 1) ** -0.5 * D[0])]
    F += [(1 - 1 / q) ** -0.5 * (D[n] - q ** -0.5 * D[n - 1]) for n in range(2, m + 1)]
    for n in range(m + 1):
        rep.check(f"e_{n} from basis 3 (up to a unimodular scalar)", _phase_residual(model, F[n], E[n]))
    for n in range(1, m + 1):
        Dn = sum((1 - 1 / q) ** 0.5 * q ** (-k / 2) * F[n - k] for k in range(n - 1))
        Dn = Dn + q ** (-(n - 1) / 2) * ((1 + 1 / q) ** -0.5 * F[1] + (q + 1) ** -0.5 * F[0])
        rep.check(f"D_{n} in basis 2", _maxabs(Dn - D[n]))
    expected = [1, q] + [q ** n - q ** (n - 2) for n in range(2, m + 1)]
    for n in range(m + 1):
        rep.check_int(f"d_{n}", expected[n], V.k_span_dimension(V.from_coords(model, chars, E[n], n)))


def _ramified_principal(model: FiniteModel, rng: np.random.Generator, rep: SuiteReport) -> None:
    """pi(1, omega) with c(omega) = c: basis 1 = basis 3 and the basis 2 relations."""
    p, m, q = model.p, model.m, model.p
    c = 2 if p == 2 else 1
    omega = LocalCharacter.ramified(p, c, 1, _unit(rng))
    chars = CharacterPair(LocalCharacter.unramified(p, 1.0), omega)
    rep.case_params.update({"conductor": c, "omega_at_p": _c(omega.value_at_uniformizer)})
    kmax = m - c
    D = [V.D_vector(model, chars, k) for k in range(kmax + 1)]
    rep.check("D_0 equivariant", V.equivariance_residual(D[0]))
    K1 = V.k1_average_matrix(model, chars, c)
    rep.check(f"D_0 is K_1[p^{c}]-invariant", _maxabs(K1 @ D[0].coords - D[0].coords))
    rep.check_int(f"dim of K_1[p^{c}]-invariants", 1, int(round(np.trace(K1).real)))
    for k in range(kmax + 1):
        rep.check(f"|D_{k}| = 1", abs(D[k].norm() - 1))
    for n in range(1, kmax + 1):
        rep.check(f"a(p^-{n})D_0 = D_{n}", _maxabs(V.translate(D[0], -n).coords - D[n].coords))
    E = [D[0].coords] + [(1 - 1 / q) ** -0.5 * (D[n].coords - q ** -0.5 * D[n - 1].coords) for n in range(1, kmax + 1)]
    G = np.array([[_pair(model, x, y) for y in E] for x in E])
    rep.check("e_n from basis 3 orthonormal", _maxabs(G - np.eye(len(E))))
    GS = _gram_schmidt(model, [d.coords for d in D])
    for n in range(len(E)):
        rep.check(f"e_{n} equals Gram-Schmidt output", _maxabs(E[n] - GS[n]))
    for n in range(1, kmax + 1):
        rhs = (1 - 1 / q) ** 0.5 * sum(q ** (-k / 2) * E[n - k] for k in range(n)) + q ** (-n / 2) * E[0]
        rep.check(f"D_{n} in basis 2 (corrected e_0 coefficient)", _maxabs(rhs - D[n].coords))
        variant = (1 - 1 / q) ** 0.5 * sum(q ** (-k / 2) * E[n - k] for k in range(n + 1))
        rep.discrepancy(f"D_{n} in basis 2 (variant)", _maxabs(variant - D[n].coords),
                        "inverting e_n = (1-q^-1)^-1/2 (D_n - q^-1/2 D_n-1) gives coefficient q^-n/2 on e_0")
    expected = [q ** c + q ** (c - 1)] + [q ** (n + c) - q ** (n + c - 2) for n in range(1, kmax + 1)]
    for n in range(len(E)):
        rep.check_int(f"d_{n}", expected[n], V.k_span_dimension(V.from_coords(model, chars, E[n], c + n)))


def _l_trivial_principal(model: FiniteModel, rng: np.random.Generator, rep: SuiteReport) -> bool:
    """pi(chi_1, chi_2) with both characters ramified: the new vector and its first translate."""
    p, m = model.p, model.m
    c1 = 2 if p == 2 else 1
    cond = 2 * c1
    if cond > m:
        return False
    chars = CharacterPair(LocalCharacter.ramified(p, c1, 1, _unit(rng)), LocalCharacter.ramified(p, c1, 1, _unit(rng)))
    rep.case_params.update({"conductor": cond})
    K1 = V.k1_average_matrix(model, chars, cond)
    rep.check_int(f"dim of K_1[p^{cond}]-invariants", 1, int(round(np.trace(K1).real)))
    if cond > 1:
        rep.check_int(f"dim of K_1[p^{cond - 1}]-invariants", 0,
                      int(round(np.trace(V.k1_average_matrix(model, chars, cond - 1)).real)))
    z = V.random_vector(model, chars, rng).coords
    e0 = V.from_coords(model, chars, K1 @ z, cond)
    e0 = e0 * (1 / e0.norm())
    if cond + 1 <= m:
        f1 = V.translate(e0, -1)
        rep.check("<a(p^-1)e_0, e_0> = 0", abs(f1.inner(e0)))
        rep.check("|a(p^-1)e_0| = 1", abs(f1.norm() - 1))
        K1n = V.k1_average_matrix(model, chars, cond + 1)
        rep.check_int(f"dim of K_1[p^{cond + 1}]-invariants", 2, int(round(np.trace(K1n).real)))
    return True


def _kirillov_cases(q: int, rng: np.random.Generator, rep: SuiteReport, n_max: int = 6) -> None:
    # L(s, pi) = 1: translates of 1_{o^x} are orthonormal
    W0 = W.unit_indicator_newvector()
    worst = 0.0
    for a in range(n_max + 1):
        for b in range(n_max + 1):
            A, B = W.translate_kirillov(W0, a), W.translate_kirillov(W0, b)
            s = sum(A(k) * np.conj(B(k)) for k in range(n_max + 1))
            worst = max(worst, abs(s - (a == b)))
    rep.check("L=1: basis 1 orthonormal", worst)
    # Steinberg: e_n = (1-q^-2)^-1/2 {a(p^-n)e_0 - conj(chi) q^-1 a(p^-(n-1))e_0}
    for label, chi in (("+1", 1.0 + 0j), ("-1", -1.0 + 0j), ("generic", _unit(rng))):
        S = W.steinberg_newvector(chi, q)
        rep.check(f"Steinberg chi={label}: |e_0| = 1", abs(W.kirillov_inner(S, S, 0, q ** -2).value - 1))
        for coef, tag in ((np.conj(chi), "conj"), (chi, "variant")):
            def e(n: int, coef=coef):
                A = W.translate_kirillov(S, n)
                B = W.translate_kirillov(S, n - 1)
                return lambda k: (A(k) - coef / q * B(k)) / math.sqrt(1 - q ** -2)
            basis = [S] + [e(n) for n in range(1, n_max + 1)]
            worst = 0.0
            for i in range(len(basis)):
                for j in range(len(basis)):
                    # translates by up to n_max raise the majorant by q^(2 n_max)
                    s = W.kirillov_inner(basis[i], basis[j], 0, q ** -2, scale=4.0 * q ** (2 * n_max)).value
                    worst = max(worst, abs(s - (i == j)))
            # e_n must lie in the span of the translates up to n, which holds by construction
            name = f"Steinberg chi={label}: e_n orthonormal ({tag})"
            if tag == "conj" or label != "generic":
                rep.check(name, worst)
            else:
                rep.discrepancy(name, worst, "the variant coefficient chi(p) equals conj(chi(p)) only for chi(p) = +-1")


def suite_basis(model: FiniteModel, rng: np.random.Generator) -> list[SuiteReport]:
    p, m = model.p, model.m
    out = []
    for tempered in (True, False):
        rep = SuiteReport("basis", p, m, {"case": "spherical"})
        _spherical_basis(model, rng, rep, tempered)
        out.append(rep)
    rep = SuiteReport("basis", p, m, {"case": "ramified-principal pi(1, omega)"})
    _ramified_principal(model, rng, rep)
    out.append(rep)
    rep = SuiteReport("basis", p, m, {"case": "ramified-principal L=1"})
    if _l_trivial_principal(model, rng, rep):
        out.append(rep)
    rep = SuiteReport("basis", p, m, {"case": "steinberg and supercuspidal-like (Kirillov tables)"})
    _kirillov_cases(p, rng, rep)
    out.append(rep)
    return out


# projections -----------------------------------------------------------------------

def k0_orbit_count(model: FiniteModel, j: int) -> int:
    """Number of K_0[p^j]-orbits on B(Z/p^m)\\K, by following products (no averaging)."""
    sub = model.subset(model.k0_mask(j))
    reps = model.rep_matrices
    seen = np.full(model.n_p1, -1)
    count = 0
    for i in range(model.n_p1):
        if seen[i] >= 0:
            continue
        prods = model.multiply(tuple(np.int64(v) for v in reps[i]), sub)
        seen[model.label[model.index(*prods)]] = count
        count += 1
    return count


def suite_projection(model: FiniteModel, rng: np.random.Generator) -> list[SuiteReport]:
    p, m, q = model.p, model.m, model.p
    out = []
    for tempered in (True, False):
        if tempered:
            a1, a2 = _unit(rng), _unit(rng)
        else:
            a = _complementary_exponent(rng)
            u = _unit(rng)
            a1, a2 = q ** a * u, q ** -a * u
        chars = CharacterPair.spherical(p, a1, a2)
        rep = SuiteReport("projection", p, m, {"alpha1": _c(a1), "alpha2": _c(a2), "tempered": tempered})
        P = [V.projection_matrix(model, chars, j) for j in range(m + 1)]
        for j in range(m + 1):
            rep.check(f"P_{j}^2 = P_{j}", _maxabs(P[j] @ P[j] - P[j]))
            rep.check(f"P_{j}* = P_{j}", _maxabs(P[j] - P[j].conj().T))
            rank = int(np.linalg.matrix_rank(P[j], tol=1e-8))
            rep.check_int(f"rank P_{j} = trace", rank, int(round(np.trace(P[j]).real)))
            rep.check_int(f"rank P_{j} = K_0[p^{j}]-orbits", k0_orbit_count(model, j), rank)
            rep.check_int(f"rank P_{j} = j + 1", j + 1, rank)
            for jj in range(m + 1):
                rep.check(f"P_{j}P_{jj} = P_min", _maxabs(P[j] @ P[jj] - P[min(j, jj)]))
        v = V.random_vector(model, chars, rng)
        for j in range(m + 1):
            rep.check(f"P_{j} output equivariant", V.equivariance_residual(V.project_K0(v, j)))
        e0 = V.spherical_vector(model, chars)
        f = [V.translate(e0, -n) for n in range(m + 1)]
        for n in range(1, m + 1):
            rep.check(f"translate a(p^-{n}) output equivariant", V.equivariance_residual(f[n]))
        b1, b2 = np.conj(a1), np.conj(a2)
        U = lambda k: W.complete_homogeneous(b1, b2, k)
        rep.check("P_0(a(p^-1)e_0) = q^1/2 (conj a1 + conj a2)/(q+1) e_0",
                  _maxabs(V.project_K0(f[1], 0).coords - q ** 0.5 * (b1 + b2) / (q + 1) * e0.coords))
        for n in range(1, m + 1):
            for k in range(n):
                lhs = V.project_K0(f[n], n - k).coords
                rhs = q ** (-k / 2) * U(k) * f[n - k].coords - q ** (-(k + 1) / 2) * b1 * b2 * U(k - 1) * f[n - k - 1].coords
                rep.check(f"P_{n - k}(a(p^-{n})e_0)", _maxabs(lhs - rhs))
            lhs = V.project_K0(f[n], 0).coords
            rhs = q ** (-n / 2) * (U(n) - (b1 + b2) / (q + 1) * U(n - 1)) * e0.coords
            rep.check(f"P_0(a(p^-{n})e_0)", _maxabs(lhs - rhs))
        out.append(rep)
    return out


# local integrals -------------------------------------------------------------------

def suite_integrals(q: int, rng: np.random.Generator, m: int = 0) -> list[SuiteReport]:
    rep = SuiteReport("integrals", q, m, {"q": q})
    alphas = [_unit(rng), q ** _complementary_exponent(rng), q ** -_complementary_exponent(rng) * _unit(rng)]
    for i, a in enumerate(alphas):
        for n in range(0, 5):
            r = W.ramified_pairing_sum(a, q, n)
            rep.check(f"ramified pairing alpha#{i} n={n}", abs(r.value - W.ramified_pairing_closed(a, q, n)) + r.tail_bound)
        for n in range(1, 5):
            a1 = _unit(rng)
            r = W.unramified_pairing_sum(a, a1, q, n)
            rep.check(f"unramified pairing alpha#{i} n={n}", abs(r.value - W.unramified_pairing_closed(a, a1, q, n)) + r.tail_bound)
    svals = [0.0, 0.3, 0.7j, complex(0.5 * rng.random(), rng.standard_normal())]
    for s in svals:
        rep.check(f"A_0(s={s}) = 1", abs(W.A_ratio(0, s, q) - 1))
        for l in range(0, 6):
            r = W.translated_self_pairing_sum(l, s, q)
            rep.check(f"translated pairing l={l} s={s}", abs(r.value - W.translated_self_pairing_closed(l, s, q)) + r.tail_bound)
            if l == 0:
                continue
            rep.check(f"A_{l}(s={s})", abs(W.plain_ratio_sum(l, s, q) - W.A_ratio(l, s, q)))
            a = _unit(rng)
            tw = W.twisted_ratio_sum(l, s, q, a)
            rep.check(f"A'_{l}(s={s}) corrected", abs(tw - W.A_twisted_ratio(l, s, q, a)))
            pr = abs(tw - W.A_twisted_ratio(l, s, q, a, variant=True))
            if l == 1:
                rep.check(f"A'_{l}(s={s}) variant", pr)
            else:
                rep.discrepancy(f"A'_{l}(s={s}) variant", pr, "variant denominator 1 + alpha q^-l(1+s) matches the sums only for l = 1")
            rep.check(f"A''_{l}(s={s})", abs(W.character_ratio_sum(l, s, q, a) - W.A_character_ratio(l, s, q, a)))
    # degenerate Satake parameters
    a = _unit(rng)
    worst = 0.0
    delta = a * 1e-9
    for k in range(0, 12):
        # first-order expansion in the second parameter: d h_k / d a2 at (a, a) is k(k+1)/2 a^(k-1)
        slope = q ** (-k / 2) * k * (k + 1) / 2 * a ** (k - 1) if k else 0
        near = W.spherical_whittaker((a, a + delta), k, q)
        worst = max(worst, abs(near - W.spherical_whittaker_degenerate(a, k, q) - slope * delta))
    rep.check("degenerate Satake continuity", worst)
    rep.check("degenerate Satake exact", max(abs(W.spherical_whittaker((a, a), k, q) - W.spherical_whittaker_degenerate(a, k, q)) for k in range(12)))
    rep.check("W vanishes for k < 0", max(abs(W.spherical_whittaker((a, 1 / a), k, q)) for k in range(-5, 0)))
    b = _unit(rng)
    macd = max(abs(W.spherical_whittaker((a, b), k, q) - q ** (-k / 2) * (a ** (k + 1) - b ** (k + 1)) / (a - b)) for k in range(12))
    rep.check("MacDonald closed form", macd)
    return [rep]


# orchestration ------------------------------------------------------------------

_MODELS: dict = {}


def get_model(p: int, m: int) -> FiniteModel:
    key = (p, m)
    if key not in _MODELS:
        _MODELS[key] = FiniteModel(p, m)
    return _MODELS[key]


def run_suite(p: int, m: int, suite: str, seed: int = 0) -> list[SuiteReport]:
    """Run one suite ("all" runs every suite in order) with a seeded generator."""
    names = SUITES if suite == "all" else (suite,)
    for s in names:
        if s not in SUITES:
            raise ValueError(f"unknown suite {s!r}")
    model = get_model(p, m)
    reports: list[SuiteReport] = []
    for s in names:
        rng = np.random.default_rng([seed, SUITES.index(s)])
        if s == "hecke":
            reports += suite_hecke(model, rng)
        elif s == "adjoint":
            reports += suite_adjoint(model, rng)
        elif s == "basis":
            reports += suite_basis(model, rng)
        elif s == "projection":
            reports += suite_projection(model, rng)
        else:
            reports += suite_integrals(p, rng, m)
    for r in reports:
        r.case_params["seed"] = seed
    return reports


def reports_to_json(reports: list[SuiteReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


__all__ = [
    "SUITES",
    "SuiteReport",
    "TOL",
    "coset_partition",
    "coset_relations_exact",
    "get_model",
    "hecke_coefficients",
    "k0_orbit_count",
    "lambda0",
    "lambda0_tilde",
    "reports_to_json",
    "run_suite",
    "spherical_eigen_cases",
]
