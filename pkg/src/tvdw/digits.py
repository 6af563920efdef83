"""Base-r digit strings, deficiency profiles and the ``~_r`` equivalence.

Everything here works for an even base ``r >= 2``.  The deficiency after
``j`` digits is::

    D_j = #{i <= j : e_i < r/2} - #{i <= j : e_i >= r/2}

A string of depth ``2m`` with ``D_{2m} = 0`` is *balanced* of order ``m``.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

Rational = Fraction


def check_base(r: int) -> int:
    if not isinstance(r, int) or isinstance(r, bool) or r < 2 or r % 2:
        raise ValueError(f"base must be an even integer >= 2, got {r!r}")
    return r


@dataclass(frozen=True)
class DigitString:
    """A finite base-``r`` digit string ``0.e_1 e_2 ... e_N``.

    Trailing zeros are significant: this is a string, not a number.
    """

    base: int
    digits: tuple[int, ...]

    def __post_init__(self):
        check_base(self.base)
        object.__setattr__(self, "digits", tuple(int(e) for e in self.digits))
        for e in self.digits:
            if not 0 <= e < self.base:
                raise ValueError(f"digit {e} out of range for base {self.base}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        sep = "" if self.base <= 10 else ","
        return "0." + sep.join(map(str, self.digits)) + f"_{self.base}"

    def numerator(self) -> int:
        k = 0
        for e in self.digits:
            k = k * self.base + e
        return k

    def padded(self, depth: int) -> DigitString:
        if depth < self.depth:
            raise ValueError("cannot pad to a smaller depth")
        return DigitString(self.base, self.digits + (0,) * (depth - self.depth))


@functools.total_ordering
@dataclass(frozen=True, eq=True)
class RAdic:
    """The exact r-adic rational ``numerator / base**depth`` in canonical form.

    Canonical form strips trailing zero digits, so ``depth`` is the length
    of the expansion ended by zeros and two values are equal iff their
    fields are equal.
    """

    numerator: int
    depth: int
    base: int

    def __post_init__(self):
        check_base(self.base)
        k, N, r = self.numerator, self.depth, self.base
        if N < 0 or k < 0 or k > r**N:
            raise ValueError(f"{k}/{r}^{N} is not in [0, 1]")
        while N > 0 and k % r == 0:
            k //= r
            N -= 1
        object.__setattr__(self, "numerator", k)
        object.__setattr__(self, "depth", N)

    @classmethod
    def from_fraction(cls, x, base: int) -> RAdic:
        x = Fraction(x)
        check_base(base)
        q = rest = x.denominator
        while (g := math.gcd(rest, base)) > 1:
            rest //= g
        if rest != 1:
            raise ValueError(f"{x} is not an r-adic rational for r={base}")
        den, N = 1, 0
        while den % q:
            den *= base
            N += 1
        return cls(x.numerator * (den // q), N, base)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.base**self.depth)

    def digits(self, depth: int | None = None) -> DigitString:
        """The expansion as a digit string, zero-padded to ``depth`` if given."""
        if self.numerator == self.base**self.depth and self.depth == 0:
            raise ValueError("1 has no expansion in [0, 1)")
        ds = expand(self.numerator, self.depth, self.base)
        return ds if depth is None else ds.padded(depth)

    def __lt__(self, other):
        if not isinstance(other, RAdic):
            return NotImplemented
        return self.value < other.value

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return str(self.value)


def as_radic(x, base: int | None = None) -> RAdic:
    """Coerce a ``RAdic``, ``DigitString`` or rational-like value."""
    if isinstance(x, RAdic):
        if base is not None and x.base != base:
            raise ValueError("base mismatch")
        return x
    if isinstance(x, DigitString):
        return RAdic(x.numerator(), x.depth, x.base)
    if base is None:
        raise ValueError("a base is required to interpret a plain rational")
    return RAdic.from_fraction(x, base)


def expand(k: int, N: int, r: int) -> DigitString:
    """The unique ``N``-digit base-``r`` string with value ``k / r**N``."""
    check_base(r)
    if N < 0 or not 0 <= k < r**N:
        raise ValueError(f"need 0 <= k < r^N, got k={k}, N={N}, r={r}")
    out = []
    for _ in range(N):
        k, e = divmod(k, r)
        out.append(e)
    return DigitString(r, tuple(reversed(out)))


def value(ds: DigitString) -> Fraction:
    return Fraction(ds.numerator(), ds.base**ds.depth)


def deficiency_profile(ds: DigitString) -> list[int]:
    """``[D_1, ..., D_N]`` for the string."""
    half = ds.base // 2
    out, d = [], 0
    for e in ds.digits:
        d += 1 if e < half else -1
        out.append(d)
    return out


def deficiency(ds: DigitString, j: int) -> int:
    if not 1 <= j <= ds.depth:
        raise ValueError(f"j must be in 1..{ds.depth}, got {j}")
    return deficiency_profile(DigitString(ds.base, ds.digits[:j]))[-1]


class BalanceInfo(NamedTuple):
    balanced: bool
    order: int
    generation: int
    leading: bool
    zero_positions: tuple[int, ...]


def classify(ds: DigitString) -> BalanceInfo:
    profile = deficiency_profile(ds)
    zeros = tuple(j for j, d in enumerate(profile, 1) if d == 0)
    balanced = ds.depth % 2 == 0 and (ds.depth == 0 or profile[-1] == 0)
    leading = (
        balanced
        and all(d >= 0 for d in profile)
        and all(ds.digits[j - 1] == ds.base // 2 for j in zeros)
    )
    return BalanceInfo(balanced, ds.depth // 2 if balanced else 0, len(zeros), leading, zeros)


def tail_padded(ds: DigitString) -> DigitString:
    """Pad with zeros until every later deficiency zero has been reached.

    Past depth ``N + max(0, -D_N)`` the deficiency only increases, so the
    padded string carries every zero of the infinite expansion.
    """
    d = deficiency_profile(ds)[-1] if ds.depth else 0
    return ds.padded(ds.depth + max(0, -d))


def balanced_digits(x) -> DigitString | None:
    """The balanced string representing ``x``, or None if ``x`` is not balanced.

    An r-adic ``x`` with canonical depth ``n`` is balanced iff ``D_n <= 0``;
    its order is then ``(n - D_n) / 2``.
    """
    x = as_radic(x)
    if x.numerator == 1 and x.depth == 0:
        return None
    ds = x.digits()
    d = deficiency_profile(ds)[-1] if ds.depth else 0
    if d > 0:
        return None
    return ds.padded(ds.depth - d)


class BalancedInterval(NamedTuple):
    x0: RAdic
    interval: tuple[Fraction, Fraction]

    @property
    def order(self) -> int:
        lo, hi = self.interval
        width, m, r2 = hi - lo, 0, self.x0.base**2
        while width < 1:
            width *= r2
            m += 1
        return m


def balanced_interval_of(x) -> BalancedInterval:
    """A balanced ``x0`` such that ``x`` is an endpoint of ``I(x0) = [x0, x0 + r^-2m]``.

    Three cases on ``p = D_n(x)`` at the canonical depth ``n``:

    * ``p <= 0``: ``x`` itself is balanced once padded with ``-p`` zeros;
      ``x`` is the left endpoint.
    * ``p > 0`` and ``e_n != r/2``: ``x0 = x - r^-(n+p)``.
    * ``p > 0`` and ``e_n == r/2``: ``x0 = x - r^-(n+p+2)``.

    In the last two cases ``x`` is the right endpoint.
    """
    x = as_radic(x)
    r = x.base
    if not 0 < x.value < 1:
        raise ValueError("x must lie in (0, 1)")
    ds = x.digits()
    n = ds.depth
    p = deficiency_profile(ds)[-1]
    if p <= 0:
        width = Fraction(1, r ** (n - p))
        return BalancedInterval(x, (x.value, x.value + width))
    shift = n + p if ds.digits[-1] != r // 2 else n + p + 2
    x0 = RAdic.from_fraction(x.value - Fraction(1, r**shift), r)
    return BalancedInterval(x0, (x0.value, x.value))


def block_flip(ds: DigitString, a: int, b: int) -> DigitString:
    """Complement digits ``a+1 .. b`` (``e -> r-1-e``) between two deficiency zeros."""
    if not 0 <= a < b <= ds.depth:
        raise ValueError(f"need 0 <= a < b <= depth, got a={a}, b={b}")
    profile = [0] + deficiency_profile(ds)
    if profile[a] != 0 or profile[b] != 0:
        raise ValueError("block ends must sit at deficiency zeros")
    r = ds.base
    digits = list(ds.digits)
    for i in range(a, b):
        digits[i] = r - 1 - digits[i]
    return DigitString(r, tuple(digits))


def local_equiv(x, y) -> bool:
    """``x ~_r y``: equal ``|D_j|`` for every j and digits equal or complementary.

    Beyond the longer expansion both tails are zero, so equality of ``|D_j|``
    for all later ``j`` reduces to ``D_N(x) == D_N(y)`` at the common depth.
    """
    x, y = as_radic(x), as_radic(y)
    if x.base != y.base:
        raise ValueError("different bases")
    r = x.base
    N = max(x.depth, y.depth)
    dx, dy = x.digits(N), y.digits(N)
    for e, f in zip(dx.digits, dy.digits):
        if e != f and e + f != r - 1:
            return False
    px, py = deficiency_profile(dx), deficiency_profile(dy)
    if any(abs(a) != abs(b) for a, b in zip(px, py)):
        return False
    return N == 0 or px[-1] == py[-1]


def flip_blocks(ds: DigitString) -> list[tuple[int, int]]:
    """Consecutive deficiency-zero pairs ``(a, b)`` of ``ds`` starting from 0."""
    zeros = [0] + [j for j, d in enumerate(deficiency_profile(ds), 1) if d == 0]
    return list(zip(zeros, zeros[1:]))


def local_class(x) -> frozenset[RAdic]:
    """The ``~_r`` class of an r-adic ``x``: all block-flip combinations.

    Blocks run between consecutive deficiency zeros of the (tail-padded)
    expansion; the infinite tail after the last zero is never flipped since
    that would produce an expansion ending in ``r-1`` digits.
    """
    x = as_radic(x)
    if x.depth == 0:
        return frozenset([x])
    ds = tail_padded(x.digits())
    blocks = flip_blocks(ds)
    out = set()
    for choice in itertools.product((False, True), repeat=len(blocks)):
        cur = ds
        for (a, b), flip in zip(blocks, choice):
            if flip:
                cur = block_flip(cur, a, b)
        out.add(as_radic(cur))
    return frozenset(out)


def class_representative(x) -> RAdic:
    """Smallest element of the local class of ``x``."""
    return min(local_class(x))


def all_strings(r: int, N: int) -> Sequence[DigitString]:
    return [expand(k, N, r) for k in range(r**N)]
