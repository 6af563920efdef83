"""Exact evaluation of the Takagi-van der Waerden function

    T_r(x) = sum_{n >= 0} phi(r^n x) / r^n,    phi(x) = dist(x, Z).

At an r-adic point ``k / r^N`` every term with ``n >= N`` vanishes, so the
value is a finite exact sum; elsewhere only partial sums with a tail bound
are offered.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .digits import RAdic, as_radic, check_base, deficiency_profile, expand


@dataclass(frozen=True)
class Enclosure:
    """Closed exact interval ``[lo, hi]``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, v) -> Enclosure:
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __contains__(self, y) -> bool:
        return self.lo <= y <= self.hi

    def as_pair(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)


def max_value(r: int) -> Fraction:
    """Maximum of ``T_r`` for even ``r``: ``r^2 / (2r^2 - 2)``."""
    check_base(r)
    return Fraction(r * r, 2 * r * r - 2)


@dataclass(frozen=True)
class TakagiParams:
    r: int

    def __post_init__(self):
        check_base(self.r)

    @property
    def max_value(self) -> Fraction:
        return max_value(self.r)


def dist_to_int(x) -> Fraction:
    x = Fraction(x)
    frac = x - (x.numerator // x.denominator)
    return min(frac, 1 - frac)


def eval_exact(x, r: int | None = None) -> Fraction:
    """Exact ``T_r(x)`` for an r-adic ``x`` in ``[0, 1]``."""
    x = as_radic(x, r)
    return Fraction(kernels.scaled_value(x.numerator, x.depth, x.base), x.base**x.depth)


def eval_partial(x, n: int, r: int) -> Fraction:
    """``T_{r,n}(x) = sum_{k < n} phi(r^k x) / r^k``, exact for any rational ``x``."""
    check_base(r)
    x = Fraction(x)
    total = Fraction(0)
    scale = Fraction(1)
    for _ in range(n):
        total += dist_to_int(x) * scale
        x *= r
        scale /= r
    return total


def tail_bound(n: int, r: int) -> Fraction:
    """Bound on ``|T_r - T_{r,n}|`` from ``phi <= 1/2``."""
    return Fraction(r, 2 * (r - 1) * r**n)


def enclosure(r: int, n: int, j: int) -> Enclosure:
    """Certified range of ``T_r`` on the cell ``[j, j+1] / r^n``.

    On the cell ``T_r`` is an affine function (from the endpoint values,
    slope ``D_n(j / r^n)``) plus ``r^-n`` times a copy of ``T_r`` which lies
    in ``[0, M_r]``.
    """
    check_base(r)
    if not 0 <= j < r**n:
        raise ValueError(f"cell index {j} out of range for depth {n}")
    a = kernels.scaled_value(j, n, r)
    d = deficiency_profile(expand(j, n, r))[-1] if n else 0
    scale = r**n
    lo, hi = min(a, a + d), max(a, a + d)
    return Enclosure(Fraction(lo, scale), Fraction(hi, scale) + max_value(r) / scale)


def self_affine_rhs(x, n: int, k: int) -> Fraction:
    """Right-hand side of the cell decomposition of ``T_r(x)`` on ``[k, k+1] / r^n``.

    ``T_r(k/r^n) + r^-n T_r(r^n x - k) + D_n(k/r^n) (r^n x - k) / r^n``.
    Kept separate from :func:`eval_exact` so the two can be checked against
    each other.
    """
    x = as_radic(x)
    r = x.base
    scale = r**n
    t = x.value * scale - k
    if not 0 <= t <= 1:
        raise ValueError("x is not in the cell")
    corner = eval_exact(RAdic(k, n, r))
    d = deficiency_profile(expand(k, n, r))[-1] if n else 0
    return corner + eval_exact(RAdic.from_fraction(t, r)) / scale + d * t / scale


def _witness_step(x: RAdic) -> RAdic:
    """Another point with the same Takagi value and a longer expansion.

    With ``p = D_n(x)`` at the canonical depth ``n`` and last digit ``e``:
    for ``p > 0`` (and ``p in {0, -1}`` when ``e = r/2``) step left to the
    balanced ``x0`` whose interval ``I(x0)`` ends at ``x``; for ``p = 0``
    with ``e != r/2`` move ``e`` to ``r/2`` through equal-valued neighbours;
    otherwise step right to the far end of ``I(x)``.  Both ends of any
    ``I(x0)`` carry the same value.
    """
    r, half = x.base, x.base // 2
    ds = x.digits()
    n = ds.depth
    p = deficiency_profile(ds)[-1]
    last = ds.digits[-1]
    v = x.value
    if p > 0:
        shift = n + p if last != half else n + p + 2
        return RAdic.from_fraction(v - Fraction(1, r**shift), r)
    if p == 0 and last != half:
        return RAdic.from_fraction(v + Fraction(half - last, r**n), r)
    if p in (0, -1) and last == half:
        return RAdic.from_fraction(v - Fraction(1, r ** (n + p + 2)), r)
    return RAdic.from_fraction(v + Fraction(1, r ** (n - p)), r)


def level_witnesses(x, count: int, r: int | None = None) -> list[RAdic]:
    """``count`` distinct r-adic points sharing the Takagi value of ``x``."""
    x = as_radic(x, r)
    if not 0 < x.value < 1:
        raise ValueError("x must lie in (0, 1)")
    out = [x]
    while len(out) < count:
        out.append(_witness_step(out[-1]))
    return out[:count]
