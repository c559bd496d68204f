from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import _kernels_py, kernels

compiled = pytest.importorskip("artifact._kernels")


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")


@given(st.integers(1, 400), st.integers(-60, 60), st.integers(-60, 60))
def test_kloosterman_block_backends_agree(c, m, n):
    a = compiled.kloosterman_block(m, n, c, c)
    b = _kernels_py.kloosterman_block(m, n, c, c)
    assert np.allclose(a, b, atol=1e-10)


@given(st.integers(2, 5000))
def test_dedekind_backends_agree(c):
    h = np.arange(1, c, dtype=np.int64)
    h = h[np.gcd(h, c) == 1]
    assert np.array_equal(compiled.dedekind_u_array(h, c), _kernels_py.dedekind_u_array(h, c))


@given(st.sampled_from([(2, 3), (3, 2), (5, 2)]), st.integers(0, 2 ** 32 - 1))
def test_iwasawa_backends_agree(pm, seed):
    p, m = pm
    M = p ** m
    rng = np.random.default_rng(seed)
    A, B, C, D = (rng.integers(0, M, 64) for _ in range(4))
    keep = (A * D - B * C) % p != 0
    args = [x[keep] for x in (A, B, C, D)]
    for x, y in zip(compiled.iwasawa_table(*args, p, m), _kernels_py.iwasawa_table(*args, p, m)):
        assert np.array_equal(np.asarray(x), np.asarray(y))
