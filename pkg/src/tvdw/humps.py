"""Humps and leading humps: enumeration, closed-form counts and geometry.

A balanced ``x0`` of order ``m`` spans the hump over ``I(x0) = [x0, x0 + r^-2m]``.
Counts are indexed by order ``m`` and generation ``n`` (number of deficiency
zeros).  For ``r = 2`` the leading counts are

    card(m, n) = sum_{i=0}^{m-1} (-1)^i C(n-i-1, i) Catalan(m-i-1),   1 <= n <= m,

and a general even ``r`` multiplies them by ``(r/2)^(2m-n)``.
"""
from __future__ import annotations

import csv
import functools
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .digits import DigitString, RAdic, as_radic, balanced_digits, check_base, classify
from .takagi import Enclosure, eval_exact, max_value

#: Largest number of strings an enumeration may visit before refusing.
ENUMERATION_CAP = 5_000_000


class CapExceeded(ValueError):
    pass


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero whenever ``a < b``, ``a < 0`` or ``b < 0``."""
    if b < 0 or a < 0 or a < b:
        return 0
    return math.comb(a, b)


def hump_count(r: int, m: int) -> int:
    """All humps of order ``m``: ``(r/2)^(2m) C(2m, m)``."""
    check_base(r)
    return (r // 2) ** (2 * m) * math.comb(2 * m, m)


def _check_cap(r: int, m: int, cap: int | None) -> None:
    cap = ENUMERATION_CAP if cap is None else cap
    if hump_count(r, m) > cap:
        raise CapExceeded(f"order {m} for r={r} exceeds the enumeration cap {cap}")


def enumerate_balanced(r: int, m: int, cap: int | None = None) -> list[RAdic]:
    check_base(r)
    _check_cap(r, m, cap)
    return [RAdic(k, 2 * m, r) for k in kernels.enumerate_codes(r, m)]


def enumerate_leading(r: int, m: int, n: int | None = None, cap: int | None = None) -> list[RAdic]:
    """Leading balanced rationals of order ``m`` (and generation ``n`` if given)."""
    check_base(r)
    _check_cap(r, m, cap)
    gen = -1 if n is None else n
    return [RAdic(k, 2 * m, r) for k in kernels.enumerate_codes(r, m, True, gen)]


def count_leading_mn(r: int, m: int, n: int) -> int:
    """Number of leading humps of order ``m`` and generation ``n``."""
    check_base(r)
    if m == 0 and n == 0:
        return 1
    if not 1 <= n <= m:
        return 0
    base2 = sum((-1) ** i * binom(n - i - 1, i) * catalan(m - i - 1) for i in range(m))
    return (r // 2) ** (2 * m - n) * base2


def leading_rows(M: int):
    """Yield ``(m, row)`` for ``m = 0..M`` where ``row[n]`` is the r=2 leading count.

    Rows come from the recurrences ``card(m+1, n+1) = card(m+1, n+2) + card(m, n)``,
    ``card(m, m) = 1`` and ``card(m, 1) = card(m, 2)``; only the previous row
    is kept, so memory stays linear in ``M``.
    """
    yield 0, [1]
    if M < 1:
        return
    row = [0, 1]
    yield 1, row
    for m in range(2, M + 1):
        # unrolled: card(m, j) = 1 + sum(card(m-1, i) for j-1 <= i <= m-2)
        suffix = list(itertools.accumulate(reversed(row[1 : m - 1]), initial=1))
        row = [0, 0] + suffix[::-1]
        row[1] = row[2]
        yield m, row


@functools.lru_cache(maxsize=8)
def leading_table(M: int) -> tuple[tuple[int, ...], ...]:
    """Frozen r=2 count table ``table[m][n]`` for ``m <= M`` (moderate ``M`` only)."""
    return tuple(tuple(row) for _, row in leading_rows(M))


@dataclass(frozen=True)
class CensusRow:
    r: int
    m: int
    n: int
    count: int


@dataclass(frozen=True)
class Census:
    r: int
    m: int
    rows: tuple[CensusRow, ...]
    total_humps: int
    total_leading: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "m", "n", "count_leading", "count_humps_total"])
        for row in self.rows:
            w.writerow([row.r, row.m, row.n, row.count, self.total_humps])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "m": self.m,
            "leading_by_generation": [row.count for row in self.rows],
            "total_humps": self.total_humps,
            "total_leading": self.total_leading,
        }


def census(r: int, m: int) -> Census:
    check_base(r)
    rows = tuple(CensusRow(r, m, n, count_leading_mn(r, m, n)) for n in range(m + 1))
    return Census(r, m, rows, hump_count(r, m), sum(row.count for row in rows))


def phi_map(ds: DigitString, zero_index: int = 1) -> DigitString:
    """Move the digit at the ``zero_index``-th deficiency zero to the end (r = 2).

    With ``zero_index = 1`` this maps leading strings of generation 2 onto
    generation 1; in general it sends generation ``n + 2`` strings (moving the
    ``(n+1)``-th zero) onto generation ``n + 1`` strings ending in ``1, 1``.
    """
    if ds.base != 2:
        raise ValueError("phi_map is defined for r = 2")
    info = classify(ds)
    if not info.leading or info.generation < 2:
        raise ValueError("need a leading string of generation >= 2")
    if not 1 <= zero_index < info.generation:
        raise ValueError(f"zero_index must be in 1..{info.generation - 1}")
    k = info.zero_positions[zero_index - 1]
    d = ds.digits
    return DigitString(2, d[: k - 1] + d[k:] + (d[k - 1],))


@dataclass(frozen=True)
class Hump:
    """Geometry of the hump over ``I(x0)`` for a balanced ``x0``."""

    x0: RAdic
    order: int
    generation: int
    leading: bool
    x_interval: tuple[Fraction, Fraction]
    base: Fraction
    height: Fraction
    y_interval: tuple[Fraction, Fraction]
    trunc_y: Enclosure
    prob: Fraction

    @property
    def r(self) -> int:
        return self.x0.base


def make_hump(x0, r: int | None = None) -> Hump:
    x0 = as_radic(x0, r)
    ds = balanced_digits(x0)
    if ds is None:
        raise ValueError(f"{x0} is not balanced")
    r = x0.base
    info = classify(ds)
    m = info.order
    width = Fraction(1, r ** (2 * m))
    base = eval_exact(x0)
    height = max_value(r) * width
    return Hump(
        x0=x0,
        order=m,
        generation=info.generation,
        leading=info.leading,
        x_interval=(x0.value, x0.value + width),
        base=base,
        height=height,
        y_interval=(base, base + height),
        trunc_y=Enclosure(base, base + width / 2),
        prob=Fraction(r * r - 1, r ** (2 * m + 2)),
    )


def hump_similarity_rhs(hump: Hump, t) -> Fraction:
    """``base + r^-2m T_r(r^2m t)``: the scaled copy of the whole graph over the hump."""
    r = hump.r
    scale = r ** (2 * hump.order)
    t = Fraction(t)
    return hump.base + eval_exact(RAdic.from_fraction(t * scale, r)) / scale


@functools.lru_cache(maxsize=32)
def leading_humps(r: int, M: int, cap: int | None = None) -> tuple[Hump, ...]:
    """All leading humps of order ``<= M``, including the whole graph (order 0)."""
    check_base(r)
    out = []
    for m in range(M + 1):
        out.extend(make_hump(x) for x in enumerate_leading(r, m, cap=cap))
    return tuple(out)
