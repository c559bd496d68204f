# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the integer kernels in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, M_PI

cnp.import_array()

ctypedef long long i64


cdef inline i64 pmod(i64 x, i64 m) nogil:
    cdef i64 r = x % m
    return r + m if r < 0 else r


cdef i64 c_dedekind_u(i64 h, i64 c) nogil:
    cdef i64 hs[128]
    cdef i64 ks[128]
    cdef int depth = 0
    cdef i64 t, u = 0
    h = pmod(h, c)
    while h != 0:
        hs[depth] = h
        ks[depth] = c
        depth += 1
        t = c % h
        c = h
        h = t
    while depth > 0:
        depth -= 1
        h = hs[depth]
        c = ks[depth]
        u = (h * h + c * c + 1 - 3 * h * c - c * u) // h
    return u


cdef i64 c_inverse(i64 a, i64 m) nogil:
    cdef i64 t = 0, newt = 1, r = m, newr = pmod(a, m), q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    return pmod(t, m)


cdef i64 c_gcd(i64 a, i64 b) nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a if a >= 0 else -a


def dedekind_u(long long h, long long c):
    return c_dedekind_u(h, c)


def dedekind_u_array(h, long long c):
    cdef cnp.int64_t[:] hv = np.ascontiguousarray(h, dtype=np.int64)
    out = np.empty(hv.shape[0], dtype=np.int64)
    cdef cnp.int64_t[:] ov = out
    cdef Py_ssize_t i
    for i in range(hv.shape[0]):
        ov[i] = c_dedekind_u(hv[i], c)
    return out


def multiplier_table(long long c):
    if c == 1:
        return (np.zeros(1, np.int64), np.zeros(1, np.int64), np.full(1, 21, np.int64))
    a = np.empty(c, dtype=np.int64)
    d = np.empty(c, dtype=np.int64)
    k = np.empty(c, dtype=np.int64)
    cdef cnp.int64_t[:] av = a
    cdef cnp.int64_t[:] dv = d
    cdef cnp.int64_t[:] kv = k
    cdef i64 x, inv, t, n = 0
    for x in range(1, c):
        if c_gcd(x, c) != 1:
            continue
        inv = c_inverse(x, c)
        t = inv + x - c_dedekind_u(x, c) - 3 * c
        if t % c != 0:
            raise ArithmeticError(f"multiplier exponent not in (1/24)Z for c={c}")
        av[n] = inv
        dv[n] = x
        kv[n] = pmod(t // c, 24)
        n += 1
    return a[:n].copy(), d[:n].copy(), k[:n].copy()


def exponent_histogram(a, d, k, long long c, long long m, long long n):
    cdef i64 mod = 24 * c
    cdef cnp.int64_t[:] av = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.int64_t[:] dv = np.ascontiguousarray(d, dtype=np.int64)
    cdef cnp.int64_t[:] kv = np.ascontiguousarray(k, dtype=np.int64)
    counts = np.zeros(mod, dtype=np.int64)
    cdef cnp.int64_t[:] cv = counts
    cdef i64 mm = pmod(24 * m - 23, mod), nn = pmod(24 * n - 23, mod)
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        cv[pmod(-kv[i] * c + mm * av[i] + nn * dv[i], mod)] += 1
    return counts


def kloosterman_block(long long m, long long n, long long c_lo, long long c_hi):
    out = np.empty(c_hi - c_lo + 1, dtype=np.complex128)
    cdef double complex[:] ov = out
    cdef i64 c, x, inv, t, kk, mod, mm, nn, big
    cdef double re, im, ang
    for c in range(c_lo, c_hi + 1):
        mod = 24 * c
        mm = pmod(24 * m - 23, mod)
        nn = pmod(24 * n - 23, mod)
        re = 0.0
        im = 0.0
        if c == 1:
            big = pmod(-21 * c, mod)
            ang = 2.0 * M_PI * big / mod
            re = cos(ang)
            im = sin(ang)
        else:
            for x in range(1, c):
                if c_gcd(x, c) != 1:
                    continue
                inv = c_inverse(x, c)
                t = inv + x - c_dedekind_u(x, c) - 3 * c
                kk = pmod(t // c, 24)
                big = pmod(-kk * c + mm * inv + nn * x, mod)
                ang = 2.0 * M_PI * big / mod
                re += cos(ang)
                im += sin(ang)
        ov[c - c_lo] = re + 1j * im
    return out


cdef inline int c_val(i64 x, i64 p, int cap) nogil:
    cdef int v = 0
    if x == 0:
        return cap
    while x % p == 0:
        x //= p
        v += 1
    return v


cdef inline i64 ipow(i64 p, int e) nogil:
    cdef i64 r = 1
    while e > 0:
        r *= p
        e -= 1
    return r


def iwasawa_table(A, B, C, D, long long p, int m):
    cdef i64 M = ipow(p, m)
    cdef cnp.int64_t[:] Av = np.ascontiguousarray(A, dtype=np.int64)
    cdef cnp.int64_t[:] Bv = np.ascontiguousarray(B, dtype=np.int64)
    cdef cnp.int64_t[:] Cv = np.ascontiguousarray(C, dtype=np.int64)
    cdef cnp.int64_t[:] Dv = np.ascontiguousarray(D, dtype=np.int64)
    cdef Py_ssize_t n = Av.shape[0], i
    outs = [np.empty(n, dtype=np.int64) for _ in range(8)]
    cdef cnp.int64_t[:] k11 = outs[0]
    cdef cnp.int64_t[:] k12 = outs[1]
    cdef cnp.int64_t[:] k21 = outs[2]
    cdef cnp.int64_t[:] k22 = outs[3]
    cdef cnp.int64_t[:] v11 = outs[4]
    cdef cnp.int64_t[:] v22 = outs[5]
    cdef cnp.int64_t[:] u11 = outs[6]
    cdef cnp.int64_t[:] u22 = outs[7]
    cdef i64 det, a, b, c, d, unit, t, udet
    cdef int vdet, vc, vd
    for i in range(n):
        a = Av[i]
        b = Bv[i]
        c = Cv[i]
        d = Dv[i]
        det = a * d - b * c
        vdet = c_val(det, p, 64)
        udet = pmod(det // ipow(p, vdet), M)
        vc = c_val(c, p, 64)
        vd = c_val(d, p, 64)
        if vd <= vc:
            unit = pmod(d // ipow(p, vd), M)
            t = pmod(c // ipow(p, vd), M) * c_inverse(unit, M) % M
            k11[i] = 1
            k12[i] = 0
            k21[i] = t
            k22[i] = 1
            v22[i] = vd
            u22[i] = unit
            v11[i] = vdet - vd
            u11[i] = udet * c_inverse(unit, M) % M
        else:
            unit = pmod(c // ipow(p, vc), M)
            t = pmod(d // ipow(p, vc), M) * c_inverse(unit, M) % M
            k11[i] = 0
            k12[i] = 1 % M
            k21[i] = 1 % M
            k22[i] = t
            v22[i] = vc
            u22[i] = unit
            v11[i] = vdet - vc
            u11[i] = pmod(-udet * c_inverse(unit, M), M)
    return tuple(outs)
