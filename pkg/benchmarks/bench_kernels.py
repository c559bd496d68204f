"""Time the compiled kernels against the numpy fallback and check they agree.

Run: python benchmarks/bench_kernels.py [--repeat R]
"""

from __future__ import annotations

import argparse
import time
from typing import Callable

import numpy as np

from artifact import _kernels_py

try:
    from artifact import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _compiled = None


def _best_of(fn: Callable[[], object], repeat: int) -> tuple[float, object]:
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _iwasawa_inputs(p: int, m: int, size: int, seed: int = 0) -> tuple[np.ndarray, ...]:
    rng = np.random.default_rng(seed)
    M = p ** m
    rows = []
    while len(rows) < size:
        a, b, c, d = (int(x) for x in rng.integers(0, M, 4))
        if (a * d - b * c) % p:
            rows.append((a, b, c, d))
    arr = np.array(rows, dtype=np.int64)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3]


def cases() -> list[tuple[str, Callable[[object], object]]]:
    h = np.arange(1, 5000, dtype=np.int64)
    h = h[np.gcd(h, 5003) == 1]
    iw = _iwasawa_inputs(3, 3, 20000)
    return [
        ("dedekind_u_array c=5003", lambda k: k.dedekind_u_array(h, 5003)),
        ("multiplier_table c=997", lambda k: k.multiplier_table(997)),
        ("kloosterman_block c<=400", lambda k: k.kloosterman_block(1, 1, 1, 400)),
        ("iwasawa_table p=3 m=3 x20000", lambda k: k.iwasawa_table(*iw, 3, 3)),
    ]


def _same(a: object, b: object) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.allclose(np.asarray(a), np.asarray(b), rtol=1e-12, atol=1e-9))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not available; only the fallback is timed")
    print(f"{'kernel':32s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s} agree")
    for name, fn in cases():
        tp, outp = _best_of(lambda: fn(_kernels_py), args.repeat)
        if _compiled is None:
            print(f"{name:32s} {tp:10.4f} {'-':>11s} {'-':>8s} -")
            continue
        tc, outc = _best_of(lambda: fn(_compiled), args.repeat)
        print(f"{name:32s} {tp:10.4f} {tc:11.4f} {tp / tc:8.1f} {_same(outp, outc)}")


if __name__ == "__main__":
    main()
