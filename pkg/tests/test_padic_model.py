from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.padic.characters import CharacterPair, LocalCharacter
from artifact.padic.model import FiniteModel, PAdicMatrix, iwasawa_decompose, valuation
from artifact.padic.verify import coset_partition, get_model

MODELS = [(2, 3), (3, 3), (5, 2)]


def _entry(p: int):
    unit = st.integers(1, 10 ** 4).filter(lambda u: u % p)
    sign = st.sampled_from([1, -1])
    nz = st.builds(lambda v, a, b, s: s * Fraction(a, b) * Fraction(p) ** v, st.integers(-3, 3), unit, unit, sign)
    return st.one_of(st.just(Fraction(0)), nz)


@st.composite
def padic_matrices(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    e = [draw(_entry(p)) for _ in range(4)]
    g = PAdicMatrix(*e, p)
    if g.det == 0:
        g = PAdicMatrix(e[0] + 1, e[1], e[2], e[3] + 1, p) if (e[0] + 1) * (e[3] + 1) != e[1] * e[2] else PAdicMatrix.identity(p)
    return g


@settings(max_examples=10_000)
@given(padic_matrices())
def test_iwasawa_round_trip(g):
    b, k = iwasawa_decompose(g)
    assert b @ k == g
    assert b.is_upper_triangular()
    assert k.in_maximal_compact()


def test_iwasawa_examples():
    p = 3
    g = PAdicMatrix.of(2, 1, 1, 1, p)
    b, k = iwasawa_decompose(g)
    assert b == PAdicMatrix.identity(p) and k == g
    t = PAdicMatrix.torus(Fraction(1, 3), p)
    b, k = iwasawa_decompose(t)
    assert b == t and k == PAdicMatrix.identity(p)
    g = PAdicMatrix.lower_unipotent(1, p) @ t
    b, k = iwasawa_decompose(g)
    assert b @ k == g and k.in_maximal_compact()
    with pytest.raises(ValueError):
        iwasawa_decompose(PAdicMatrix.of(1, 2, 2, 4, p))


def test_valuation():
    assert valuation(Fraction(18, 5), 3) == 2
    assert valuation(Fraction(5, 27), 3) == -3
    assert valuation(0, 3) == float("inf")


@pytest.mark.parametrize("p,m", MODELS)
def test_model_sizes_and_indices(p, m):
    model = get_model(p, m)
    assert model.size == p ** (4 * m) * Fraction(p - 1, p) * Fraction(p * p - 1, p * p)
    assert model.size == model.expected_size()
    for j in range(1, m + 1):
        assert model.index_K0(j) == (p + 1) * p ** (j - 1)
    assert model.haar_weight * model.size == pytest.approx(1.0)


@pytest.mark.parametrize("p,m", MODELS)
def test_coset_partition_counts(p, m):
    model = get_model(p, m)
    for n in range(1, m + 1):
        c = coset_partition(model, n)
        assert c["cosets"] == p ** n + p ** (n - 1)
        assert c["unipotent"] == p ** n and c["weyl"] == p ** (n - 1)
        assert c["covers"] and c["equal_sizes"]


def test_model_rejects_bad_input():
    with pytest.raises(ValueError):
        FiniteModel(4, 2)
    with pytest.raises(ValueError):
        FiniteModel(3, 0)
    with pytest.raises(ValueError):
        FiniteModel(7, 3)


@pytest.mark.parametrize("p,c", [(3, 1), (3, 2), (5, 1), (2, 2), (2, 3)])
def test_ramified_characters(p, c):
    chi = LocalCharacter.ramified(p, c)
    assert chi.is_multiplicative()
    assert chi.exact_conductor() == c
    inv = chi.inverse()
    u = np.arange(1, p ** c)
    u = u[u % p != 0]
    assert np.allclose(chi.unit_value(u) * inv.unit_value(u), 1)


def test_character_pair_data():
    pair = CharacterPair.spherical(3, 2.0, 0.25)
    assert pair.unramified and pair.satake == (2.0, 0.25)
    assert pair.alpha0 == pytest.approx(2.0)
