from __future__ import annotations

import cmath
import json

import numpy as np
import pytest

from artifact.padic import vectors as V
from artifact.padic import verify as R
from artifact.padic.characters import CharacterPair


def _ints(reports, suite):
    return {i["name"]: (i["expected"], i["observed"]) for r in reports if r.suite == suite for i in r.identities if "expected" in i}


@pytest.mark.parametrize("suite", R.SUITES)
def test_each_suite_passes_at_3_3(suite):
    reports = R.run_suite(3, 3, suite, seed=0)
    assert reports
    for r in reports:
        assert r.passed, [i for i in r.identities if not i["pass"]]
        assert r.max_residual < R.TOL


def test_hecke_coefficient_examples():
    for q in (2, 3, 5, 7):
        a = R.hecke_coefficients(3, q, 1.0)
        assert abs(a[0] - (q / (1 + q)) ** 2) < 1e-15
    assert R.lambda0(0, 3, 1.0) == pytest.approx(1.0)


def test_coset_relations_exact():
    for p in (2, 3, 5):
        for n in (1, 2, 3):
            assert R.coset_relations_exact(p, n) == 0


def test_adjoint_examples():
    model = R.get_model(3, 3)
    rng = np.random.default_rng(5)
    a1 = cmath.exp(0.37j)
    for alpha0 in (1.0, 1j):
        chars = CharacterPair.spherical(3, a1, 1 / (alpha0 * a1))
        T = V.hecke_matrix(model, chars, 2)
        twist = alpha0 ** 2
        assert np.max(np.abs(T.conj().T - twist * T)) < 1e-12
    assert (1j) ** -2 == -1
    chars = CharacterPair.spherical(3, a1, 1 / a1)
    f, g = V.random_vector(model, chars, rng), V.random_vector(model, chars, rng)
    assert abs(V.hecke_T0(0, f).inner(g) - f.inner(V.hecke_T0(0, g))) < 1e-12


def test_dimension_examples():
    ints = _ints(R.run_suite(3, 3, "basis"), "basis")
    assert ints["d_0"][0] in (1, 4)
    reports = R.run_suite(3, 3, "basis")
    seen = [(i["name"], i["observed"]) for r in reports for i in r.identities if i["name"].startswith("d_")]
    assert seen[:4] == [("d_0", 1), ("d_1", 3), ("d_2", 8), ("d_3", 24)]
    assert ("d_0", 4) in seen[4:]


def test_coset_cardinalities_in_report():
    ints = _ints(R.run_suite(5, 2, "hecke"), "hecke")
    assert ints["|K_0[p^2]\\K|"] == (30, 30)
    assert ints["unipotent cosets n=2"] == (25, 25)
    assert ints["Weyl cosets n=2"] == (5, 5)


def test_report_json_schema_and_determinism():
    a = R.reports_to_json(R.run_suite(2, 3, "projection", seed=11))
    b = R.reports_to_json(R.run_suite(2, 3, "projection", seed=11))
    assert a == b
    data = json.loads(a)
    for rep in data:
        assert {"suite", "p", "m", "case_params", "identities"} <= set(rep)
        for ident in rep["identities"]:
            assert {"name", "max_residual", "pass"} <= set(ident)
    assert R.reports_to_json(R.run_suite(2, 3, "projection", seed=12)) != a


def test_unknown_suite():
    with pytest.raises(ValueError):
        R.run_suite(3, 3, "nope")


def test_documented_discrepancies_recorded():
    reps = R.run_suite(3, 3, "integrals")
    notes = [d["name"] for r in reps for d in r.documented_discrepancies]
    assert any(n.startswith("A'_2") for n in notes)
