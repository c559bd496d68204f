"""Pure-Python/numpy implementations of the hot integer kernels.

The compiled module ``_kernels`` exposes the same functions with the same
signatures; ``artifact.kernels`` picks one at import time.
"""

from __future__ import annotations

import math

import numpy as np


def dedekind_u(h: int, c: int) -> int:
    """12*c*s(h, c) as an exact integer, for gcd(h, c) = 1.

    Multiplying the reciprocity law by 12hk gives
    h*U(h,k) + k*U(k,h) = h^2 + k^2 + 1 - 3hk, so U(h,k) follows from
    U(k mod h, h) by one exact division.
    """
    h %= c
    chain = []
    while h:
        chain.append((h, c))
        h, c = c % h, h
    u = 0
    for h, k in reversed(chain):
        u = (h * h + k * k + 1 - 3 * h * k - k * u) // h
    return u


def dedekind_u_array(h: np.ndarray, c: int) -> np.ndarray:
    """Vectorised dedekind_u over an array of residues coprime to c."""
    hh = np.asarray(h, dtype=np.int64) % c
    kk = np.full_like(hh, c)
    steps = []
    active = hh != 0
    while active.any():
        steps.append((hh.copy(), kk.copy(), active.copy()))
        nh = np.where(active, kk % np.where(active, hh, 1), 0)
        nk = np.where(active, hh, kk)
        hh, kk = nh, nk
        active = hh != 0
    u = np.zeros_like(hh)
    for h, k, act in reversed(steps):
        safe_h = np.where(act, h, 1)
        upd = (h * h + k * k + 1 - 3 * h * k - k * u) // safe_h
        u = np.where(act, upd, u)
    return u


def multiplier_table(c: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(a, d, k) for every [[a, b], [c, d]] in SL2(Z) with 0 <= a, d < c.

    k is the eta-multiplier exponent: chi = e(k/24).
    """
    if c == 1:
        return (np.zeros(1, np.int64), np.zeros(1, np.int64), np.full(1, (-3) % 24, np.int64))
    d = np.array([x for x in range(1, c) if math.gcd(x, c) == 1], dtype=np.int64)
    a = np.array([pow(int(x), -1, c) for x in d], dtype=np.int64)
    u = dedekind_u_array(d, c)
    t = a + d - u - 3 * c
    if np.any(t % c):
        raise ArithmeticError(f"multiplier exponent not in (1/24)Z for c={c}")
    k = (t // c) % 24
    return a, d, k


def exponent_histogram(a: np.ndarray, d: np.ndarray, k: np.ndarray, c: int, m: int, n: int) -> np.ndarray:
    """Counts of N mod 24c with summand e(N/(24c)) = conj(chi) e((m~ a + n~ d)/c)."""
    mod = 24 * c
    big = (-k * c) % mod + ((24 * m - 23) % mod) * a % mod + ((24 * n - 23) % mod) * d % mod
    return np.bincount(big % mod, minlength=mod).astype(np.int64)


def kloosterman_block(m: int, n: int, c_lo: int, c_hi: int) -> np.ndarray:
    """S(m, n, c) in double precision for c_lo <= c <= c_hi."""
    out = np.empty(c_hi - c_lo + 1, dtype=np.complex128)
    for i, c in enumerate(range(c_lo, c_hi + 1)):
        a, d, k = multiplier_table(c)
        mod = 24 * c
        big = ((-k * c) % mod + ((24 * m - 23) % mod) * a % mod + ((24 * n - 23) % mod) * d % mod) % mod
        out[i] = np.exp(2j * np.pi * big / mod).sum()
    return out


def _valuation(x: np.ndarray, p: int, cap: int) -> np.ndarray:
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    zero = y == 0
    y[zero] = 1
    for _ in range(cap):
        div = (y % p) == 0
        if not div.any():
            break
        v += div
        y = np.where(div, y // p, y)
    v[zero] = cap
    return v


def iwasawa_table(A: np.ndarray, B: np.ndarray, C: np.ndarray, D: np.ndarray, p: int, m: int) -> tuple:
    """Integer Iwasawa decomposition g = b k for integer matrices g = [[A, B], [C, D]].

    Returns (k11, k12, k21, k22) reduced mod p^m and the triangular part as
    valuations (v11, v22) with unit residues (u11, u22) mod p^m.
    """
    M = p ** m
    A, B, C, D = (np.asarray(x, dtype=np.int64) for x in (A, B, C, D))
    det = A * D - B * C
    cap = 64
    vdet = _valuation(det, p, cap)
    vc = _valuation(C, p, cap)
    vd = _valuation(D, p, cap)
    inv = np.zeros(M, dtype=np.int64)
    for r in range(M):
        if r % p:
            inv[r] = pow(r, -1, M)
    pw = np.array([p ** i for i in range(cap + 1)], dtype=object)
    udet = (det // pw[vdet].astype(np.int64)) % M
    use_d = vd <= vc
    k11 = np.where(use_d, 1, 0)
    k12 = np.where(use_d, 0, 1)
    k21 = np.zeros_like(A)
    k22 = np.zeros_like(A)
    v11 = np.zeros_like(A)
    v22 = np.zeros_like(A)
    u11 = np.zeros_like(A)
    u22 = np.zeros_like(A)
    # column reduction through the (2,2) entry
    idx = np.nonzero(use_d)[0]
    if idx.size:
        sd = np.array([p ** int(v) for v in vd[idx]], dtype=np.int64)
        dunit = (D[idx] // sd) % M
        t = ((C[idx] // sd) % M) * inv[dunit] % M
        k21[idx] = t
        k22[idx] = 1
        v22[idx] = vd[idx]
        u22[idx] = dunit
        v11[idx] = vdet[idx] - vd[idx]
        u11[idx] = udet[idx] * inv[dunit] % M
    # Weyl branch through the (2,1) entry
    idx = np.nonzero(~use_d)[0]
    if idx.size:
        sc = np.array([p ** int(v) for v in vc[idx]], dtype=np.int64)
        cunit = (C[idx] // sc) % M
        t = ((D[idx] // sc) % M) * inv[cunit] % M
        k21[idx] = 1
        k22[idx] = t
        v22[idx] = vc[idx]
        u22[idx] = cunit
        v11[idx] = vdet[idx] - vc[idx]
        u11[idx] = (-udet[idx] * inv[cunit]) % M
    return k11 % M, k12 % M, k21 % M, k22 % M, v11, v22, u11, u22
