"""Pure-Python hot kernels.

These are the reference versions of the routines in ``_ckernels.pyx``; both
modules expose the same four functions with identical results.  All values
are integers: a point ``k / r**N`` is carried as its numerator ``k`` and the
Takagi value at it as ``T_r(k / r**N) * r**N`` (always an integer).
"""
from __future__ import annotations

import numpy as np


def scaled_value(k: int, N: int, r: int) -> int:
    """Return ``T_r(k / r**N) * r**N``.

    Term ``n`` of the series contributes ``phi(r**n x) * r**(N-n)`` which is
    ``min(k mod r**s, r**s - k mod r**s)`` with ``s = N - n``.
    """
    total = 0
    rs = 1
    for _ in range(N):
        rs *= r
        t = k % rs
        total += t if 2 * t <= rs else rs - t
    return total


def scaled_grid(r: int, N: int) -> list[int]:
    """Scaled Takagi values at every grid point ``k / r**N``, ``0 <= k <= r**N``."""
    return [scaled_value(k, N, r) for k in range(r**N + 1)]


def enumerate_codes(r: int, m: int, leading: bool = False, generation: int = -1) -> list[int]:
    """Numerators ``k`` of the balanced strings ``k / r**(2m)`` of order ``m``.

    Depth-first digit generation.  A branch is cut as soon as the deficiency
    can no longer return to zero by depth ``2m``; in leading mode also when
    the deficiency goes negative or reaches zero on a digit other than
    ``r/2``.  ``generation >= 0`` keeps only strings with that many zeros.
    Output is sorted ascending.
    """
    half = r // 2
    length = 2 * m
    out: list[int] = []

    def walk(pos: int, k: int, d: int, zeros: int) -> None:
        if pos == length:
            if d == 0 and (generation < 0 or zeros == generation):
                out.append(k)
            return
        remaining = length - pos - 1
        for digit in range(r):
            nd = d + 1 if digit < half else d - 1
            if abs(nd) > remaining:
                continue
            nz = zeros
            if nd == 0:
                if leading and digit != half:
                    continue
                nz += 1
                if 0 <= generation < nz:
                    continue
            if leading and nd < 0:
                continue
            walk(pos + 1, k * r + digit, nd, nz)

    walk(0, 0, 0, 0)
    return out


def refine_cells(r: int, level: int, cells: list[tuple[int, int, int]], p: int, q: int) -> list[tuple[int, int, int]]:
    """One branch-and-bound step for the level set ``T_r = p/q``.

    ``cells`` holds ``(j, A, D)`` for cells ``[j, j+1] / r**level`` where
    ``A = T_r(j / r**level) * r**level`` and ``D`` is the deficiency of the
    ``level``-digit string of ``j``.  Returns the children at ``level + 1``
    whose enclosure contains ``p/q``.  The enclosure of a cell, in units of
    ``r**-level``, is ``[min(A, A+D), max(A, A+D) + M_r]``.
    """
    half = r // 2
    u = r * r
    w = 2 * r * r - 2  # M_r = u / w
    target = w * p * r ** (level + 1)
    wq = w * q
    qu = q * u
    out = []
    for j, a, d in cells:
        for c in range(r):
            a2 = r * a + (c if c <= half else r - c) + d * c
            d2 = d + 1 if c < half else d - 1
            lo = a2 if d2 >= 0 else a2 + d2
            hi = a2 + d2 if d2 >= 0 else a2
            if wq * lo <= target <= wq * hi + qu:
                out.append((j * r + c, a2, d2))
    return out


def _digits_matrix(r: int, N: int) -> np.ndarray:
    k = np.arange(r**N, dtype=np.int64)
    cols = np.empty((N, k.size), dtype=np.int8)
    for j in range(N):
        cols[N - 1 - j] = k % r
        k //= r
    return cols


def _keys(cols: np.ndarray, r: int) -> np.ndarray:
    """Equivalence key of each column-stacked digit string (brute-force form).

    Two strings of equal depth are ``~_r`` equivalent iff they agree on the
    ``|D_j|`` profile, on the final deficiency ``D_N`` (tail rule) and on the
    digit pair ``{e, r-1-e}`` at every position.
    """
    half = r // 2
    N, size = cols.shape
    d = np.zeros(size, dtype=np.int16)
    key = np.zeros(size, dtype=np.int64)
    for j in range(N):
        e = cols[j].astype(np.int16)
        step = np.where(e < half, 1, -1).astype(np.int16)
        nd = d + step
        key = key * 2 + (np.abs(nd) > np.abs(d))
        d = nd
    key = key * 2 + (d < 0)
    for j in range(N):
        e = cols[j].astype(np.int64)
        key = key * half + np.minimum(e, r - 1 - e)
    return key


def _values(k: np.ndarray, r: int, N: int) -> np.ndarray:
    total = np.zeros(k.size, dtype=np.int64)
    rs = 1
    for _ in range(N):
        rs *= r
        t = k % rs
        total += np.minimum(t, rs - t)
    return total


def class_census(r: int, N: int) -> dict:
    """Compare brute-force ``~_r`` classes with block-flip classes on the depth-``N`` grid.

    Brute force groups all ``r**N`` strings by the equivalence key.  The
    generator side starts from every class representative (every complete
    block between deficiency zeros has positive sign), applies all subsets
    of block flips, and checks each member's key and Takagi value against
    the representative.  The two partitions coincide iff ``unsound``,
    ``incomplete`` and ``value_mismatch`` are all zero and ``covered``
    equals ``strings``.
    """
    half = r // 2
    size = r**N
    if N == 0:
        return dict(r=r, depth=0, strings=1, classes=1, covered=1, unsound=0, incomplete=0, value_mismatch=0)
    cols = _digits_matrix(r, N)
    keys = _keys(cols, r)
    _, inverse, group_size = np.unique(keys, return_inverse=True, return_counts=True)

    d = np.zeros(size, dtype=np.int16)
    zeros = np.zeros(size, dtype=np.int16)
    last_zero = np.zeros(size, dtype=np.int16)
    first_neg = np.zeros(size, dtype=np.int16)
    block_of = np.empty((N, size), dtype=np.int16)
    for j in range(N):
        block_of[j] = zeros
        d = d + np.where(cols[j] < half, 1, -1).astype(np.int16)
        hit = d == 0
        zeros += hit
        last_zero = np.where(hit, j + 1, last_zero)
        first_neg = np.where((d < 0) & (first_neg == 0), j + 1, first_neg)
    rep = (first_neg == 0) | (first_neg > last_zero)
    idx = np.nonzero(rep)[0]
    z = zeros[idx].astype(np.int64)
    k = idx.astype(np.int64)
    maxz = int(z.max()) if z.size else 0
    deltas = np.zeros((maxz + 1, idx.size), dtype=np.int64)
    for j in range(N):
        inside = (j + 1) <= last_zero[idx]
        e = cols[j, idx].astype(np.int64)
        term = (r - 1 - 2 * e) * r ** (N - 1 - j)
        b = block_of[j, idx].astype(np.int64)
        np.add.at(deltas, (b[inside], np.nonzero(inside)[0]), term[inside])

    rep_keys = keys[idx]
    rep_vals = _values(k, r, N)
    unsound = 0
    value_mismatch = 0
    for mask in range(1, 1 << maxz):
        need = mask.bit_length()
        sel = np.nonzero(z >= need)[0]
        if sel.size == 0:
            continue
        member = k[sel].copy()
        for b in range(need):
            if mask >> b & 1:
                member += deltas[b, sel]
        unsound += int(np.count_nonzero(keys[member] != rep_keys[sel]))
        value_mismatch += int(np.count_nonzero(_values(member, r, N) != rep_vals[sel]))
    incomplete = int(np.count_nonzero(group_size[inverse[idx]] != (1 << z)))
    covered = int((1 << z).sum())
    return dict(
        r=r,
        depth=N,
        strings=size,
        classes=int(idx.size),
        covered=covered,
        unsound=unsound,
        incomplete=incomplete,
        value_mismatch=value_mismatch,
    )
