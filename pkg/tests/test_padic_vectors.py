from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.padic import vectors as V
from artifact.padic.characters import CharacterPair, LocalCharacter
from artifact.padic.verify import eigenvalue_T1, get_model, lambda0, lambda0_tilde, spherical_eigen_cases

MODELS = [(2, 3), (3, 3), (5, 2)]


def _chars(p: int, kind: int, rng: np.random.Generator) -> CharacterPair:
    u = lambda: complex(np.exp(2j * math.pi * rng.random()))
    if kind == 0:
        return CharacterPair.spherical(p, u(), u())
    c = 2 if p == 2 else 1
    return CharacterPair(LocalCharacter.unramified(p, u()), LocalCharacter.ramified(p, c, value=u()))


cases = st.tuples(st.sampled_from(MODELS), st.integers(0, 1), st.integers(0, 2 ** 32 - 1))


@settings(max_examples=1000)
@given(cases)
def test_operators_preserve_equivariance(case):
    (p, m), kind, seed = case
    rng = np.random.default_rng(seed)
    model = get_model(p, m)
    chars = _chars(p, kind, rng)
    f = V.random_vector(model, chars, rng)
    assert V.equivariance_residual(f) < 1e-12
    j = int(rng.integers(0, m + 1))
    assert V.equivariance_residual(V.project_K0(f, j)) < 1e-12
    if kind == 0:
        assert V.equivariance_residual(V.hecke_T0(int(rng.integers(0, m + 1)), f)) < 1e-12
        e0 = V.spherical_vector(model, chars)
        assert V.equivariance_residual(V.translate(e0, -int(rng.integers(0, m + 1)))) < 1e-12


@settings(max_examples=1000)
@given(cases)
def test_haar_consistency(case):
    (p, m), kind, seed = case
    rng = np.random.default_rng(seed)
    model = get_model(p, m)
    chars = _chars(p, kind, rng)
    f = V.random_vector(model, chars, rng)
    g = V.random_vector(model, chars, rng)
    assert model.haar_weight * model.size == pytest.approx(1.0, abs=1e-15)
    assert abs(f.inner(g) - f.inner_full(g)) < 1e-12 * max(1.0, f.norm() * g.norm())
    assert f.inner(f).real > 0 and abs(f.inner(f).imag) < 1e-12
    zero = f * 0
    assert zero.inner(zero) == 0


@settings(max_examples=1000)
@given(cases)
def test_projector_laws(case):
    (p, m), kind, seed = case
    rng = np.random.default_rng(seed)
    model = get_model(p, m)
    chars = _chars(p, kind, rng)
    j, k = (int(x) for x in rng.integers(0, m + 1, 2))
    Pj = V.projection_matrix(model, chars, j)
    Pk = V.projection_matrix(model, chars, k)
    assert np.max(np.abs(Pj @ Pj - Pj)) < 1e-12
    assert np.max(np.abs(Pj - Pj.conj().T)) < 1e-12
    assert np.max(np.abs(Pj @ Pk - V.projection_matrix(model, chars, min(j, k)))) < 1e-12
    rank = int(np.linalg.matrix_rank(Pj, tol=1e-9))
    assert rank == round(np.trace(Pj).real)


def test_spherical_image_dimensions():
    model = get_model(3, 3)
    chars = CharacterPair.spherical(3, cmath.exp(0.3j), cmath.exp(1.1j))
    for j in range(4):
        assert round(np.trace(V.projection_matrix(model, chars, j)).real) == j + 1


def test_hecke_T0_zero_is_K_projection_and_eigenvalue_examples():
    model = get_model(3, 3)
    rng = np.random.default_rng(1)
    chars = _chars(3, 0, rng)
    e0 = V.spherical_vector(model, chars)
    assert np.max(np.abs(V.hecke_T0(0, e0).coords - e0.coords)) < 1e-14
    f = V.random_vector(model, chars, rng)
    assert np.max(np.abs(V.hecke_T0(0, f).coords - V.project_K0(f, 0).coords)) < 1e-12
    plain, tilde = spherical_eigen_cases(3, 0.0, 1.0)
    lam, res = eigenvalue_T1(model, plain)
    assert abs(lam - 1) < 1e-12 and res < 1e-12
    for s in (0.0, 0.3, 0.7j):
        for alpha0 in (1.0, 1j):
            plain, tilde = spherical_eigen_cases(3, s, alpha0)
            assert abs(eigenvalue_T1(model, plain)[0] - lambda0(s, 3, alpha0)) < 1e-10
            assert abs(eigenvalue_T1(model, tilde)[0] - lambda0_tilde(s, 3, alpha0)) < 1e-10


def test_D_vector_examples():
    model = get_model(3, 3)
    sph = CharacterPair.spherical(3, cmath.exp(0.4j), cmath.exp(-0.9j))
    D0, D1 = V.D_vector(model, sph, 0), V.D_vector(model, sph, 1)
    assert abs(D0.inner(D1) - 0.5) < 1e-14
    assert np.max(np.abs(D0.coords - V.spherical_vector(model, sph).coords)) < 1e-14
    assert np.max(np.abs(V.translate(D0, 0).coords - D0.coords)) < 1e-14
    ram = CharacterPair(LocalCharacter.unramified(3, 1.0), LocalCharacter.ramified(3, 1))
    e0 = V.D_vector(model, ram, 0)
    assert abs(e0.norm() - 1) < 1e-12
    assert V.k_span_dimension(e0) == 4


def test_level_errors():
    model = get_model(5, 2)
    chars = CharacterPair.spherical(5, 1.0, 1.0)
    e0 = V.spherical_vector(model, chars)
    with pytest.raises(V.LevelError):
        V.translate(e0, -3)
    with pytest.raises(V.LevelError):
        V.hecke_matrix(model, chars, 3)
    with pytest.raises(ValueError):
        V.spherical_vector(model, CharacterPair(LocalCharacter.unramified(5), LocalCharacter.ramified(5, 1)))


def test_brute_force_double_average_matches_hecke():
    model = get_model(2, 3)
    rng = np.random.default_rng(3)
    chars = _chars(2, 0, rng)
    f = V.random_vector(model, chars, rng)
    for n in (0, 1, 2):
        fast = V.hecke_T0(n, f).values[model.identity_index]
        assert abs(V.hecke_double_average(f, n) - fast) < 1e-12
