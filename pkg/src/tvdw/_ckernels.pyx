# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the routines in ``_pykernels``.

Integer state is held in 64-bit machine words; ``tvdw.kernels`` routes a
call here only when the caller-side bound check shows it cannot overflow.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64


cdef inline i64 _value(i64 k, int N, int r) nogil:
    cdef i64 total = 0, rs = 1, t
    cdef int s
    for s in range(N):
        rs *= r
        t = k % rs
        total += t if 2 * t <= rs else rs - t
    return total


def scaled_value(i64 k, int N, int r):
    return _value(k, N, r)


def scaled_grid(int r, int N):
    cdef i64 size = 1, k
    cdef int s
    for s in range(N):
        size *= r
    out = np.empty(size + 1, dtype=np.int64)
    cdef i64[::1] view = out
    with nogil:
        for k in range(size + 1):
            view[k] = _value(k, N, r)
    return out.tolist()


cdef void _walk(list out, int r, int half, int length, int leading, int generation,
                int pos, i64 k, int d, int zeros):
    cdef int digit, nd, nz, remaining
    if pos == length:
        if d == 0 and (generation < 0 or zeros == generation):
            out.append(k)
        return
    remaining = length - pos - 1
    for digit in range(r):
        nd = d + 1 if digit < half else d - 1
        if nd > remaining or -nd > remaining:
            continue
        nz = zeros
        if nd == 0:
            if leading and digit != half:
                continue
            nz += 1
            if generation >= 0 and nz > generation:
                continue
        if leading and nd < 0:
            continue
        _walk(out, r, half, length, leading, generation, pos + 1, k * r + digit, nd, nz)


def enumerate_codes(int r, int m, bint leading=False, int generation=-1):
    cdef list out = []
    _walk(out, r, r // 2, 2 * m, leading, generation, 0, 0, 0, 0)
    return out


def refine_cells(int r, int level, list cells, i64 p, i64 q):
    cdef int half = r // 2, c, d, d2
    cdef i64 u = r * r, w = 2 * r * r - 2
    cdef i64 R = 1, target, wq, qu, j, a, a2, lo, hi
    cdef int s
    for s in range(level + 1):
        R *= r
    target = w * p * R
    wq = w * q
    qu = q * u
    cdef list out = []
    for cell in cells:
        j, a, d = cell
        for c in range(r):
            a2 = r * a + (c if c <= half else r - c) + d * c
            d2 = d + 1 if c < half else d - 1
            if d2 >= 0:
                lo = a2
                hi = a2 + d2
            else:
                lo = a2 + d2
                hi = a2
            if wq * lo <= target and target <= wq * hi + qu:
                out.append((j * r + c, a2, d2))
    return out


cdef inline i64 _key(i64 k, int N, int r, int half, i64 *pw) nogil:
    cdef i64 key = 0, pair = 0
    cdef int j, e, d = 0, nd
    for j in range(N):
        e = <int>((k // pw[N - 1 - j]) % r)
        nd = d + 1 if e < half else d - 1
        key = key * 2 + (1 if (nd if nd >= 0 else -nd) > (d if d >= 0 else -d) else 0)
        d = nd
        pair = pair * half + (e if e < r - 1 - e else r - 1 - e)
    key = key * 2 + (1 if d < 0 else 0)
    cdef i64 hp = 1
    for j in range(N):
        hp *= half
    return key * hp + pair


def class_census(int r, int N):
    cdef int half = r // 2
    cdef i64 size = 1, keyspace, k, member, rep_key, rep_val
    cdef int j, e, d, z, nz, last_zero, first_neg, b, mask
    cdef i64 pw[64]
    cdef i64 deltas[64]
    cdef int block_of[64]
    cdef int digits[64]
    if N == 0:
        return dict(r=r, depth=0, strings=1, classes=1, covered=1, unsound=0, incomplete=0, value_mismatch=0)
    pw[0] = 1
    for j in range(1, N + 1):
        pw[j] = pw[j - 1] * r
    size = pw[N]
    keyspace = (<i64>1 << (N + 1))
    for j in range(N):
        keyspace *= half
    counts_arr = np.zeros(keyspace, dtype=np.uint16)
    cdef cnp.uint16_t[::1] counts = counts_arr
    cdef i64 classes = 0, covered = 0, unsound = 0, incomplete = 0, value_mismatch = 0
    with nogil:
        for k in range(size):
            counts[_key(k, N, r, half, pw)] += 1
        for k in range(size):
            d = 0
            z = 0
            last_zero = 0
            first_neg = 0
            for j in range(N):
                e = <int>((k // pw[N - 1 - j]) % r)
                digits[j] = e
                block_of[j] = z
                d = d + 1 if e < half else d - 1
                if d == 0:
                    z += 1
                    last_zero = j + 1
                elif d < 0 and first_neg == 0:
                    first_neg = j + 1
            if not (first_neg == 0 or first_neg > last_zero):
                continue
            classes += 1
            covered += (<i64>1) << z
            for b in range(z):
                deltas[b] = 0
            for j in range(last_zero):
                deltas[block_of[j]] += (r - 1 - 2 * digits[j]) * pw[N - 1 - j]
            rep_key = _key(k, N, r, half, pw)
            rep_val = _value(k, N, r)
            if counts[rep_key] != ((<i64>1) << z):
                incomplete += 1
            for mask in range(1, 1 << z):
                member = k
                for b in range(z):
                    if (mask >> b) & 1:
                        member += deltas[b]
                if _key(member, N, r, half, pw) != rep_key:
                    unsound += 1
                if _value(member, N, r) != rep_val:
                    value_mismatch += 1
    return dict(
        r=r,
        depth=N,
        strings=size,
        classes=classes,
        covered=covered,
        unsound=unsound,
        incomplete=incomplete,
        value_mismatch=value_mismatch,
    )
