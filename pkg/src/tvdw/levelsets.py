"""Level sets ``{x : T_r(x) = y}``: certified cell enclosures, local partitions
and the truncated-hump counter."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels
from .digits import RAdic, as_radic, check_base, deficiency_profile, local_equiv
from .humps import CapExceeded, Hump, leading_humps
from .takagi import Enclosure, enclosure, eval_exact

DEPTH_CAP = 48
CELL_CAP = 2_000_000
ORDER_CAP = 10


@dataclass(frozen=True)
class LevelSetReport:
    y: Fraction
    r: int
    depth: int
    cell_indices: tuple[int, ...]
    components: int
    certified_empty: bool
    history: tuple[int, ...] = ()

    @property
    def cells(self) -> list[tuple[Fraction, Fraction]]:
        den = self.r**self.depth
        return [(Fraction(j, den), Fraction(j + 1, den)) for j in self.cell_indices]

    def component_ranges(self) -> list[tuple[Fraction, Fraction]]:
        """``[lo, hi]`` of every maximal run of adjacent surviving cells."""
        den = self.r**self.depth
        out = []
        for a, b in _runs(self.cell_indices):
            out.append((Fraction(a, den), Fraction(b + 1, den)))
        return out

    def covers(self, x) -> bool:
        x = Fraction(x)
        return any(lo <= x <= hi for lo, hi in self.component_ranges())

    def to_dict(self) -> dict:
        den = self.r**self.depth
        return {
            "y": _fmt(self.y),
            "r": self.r,
            "depth": self.depth,
            "cells": [[j, den] for j in self.cell_indices],
            "components": self.components,
            "certified_empty": self.certified_empty,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _runs(indices) -> list[tuple[int, int]]:
    runs: list[tuple[int, int]] = []
    for j in indices:
        if runs and runs[-1][1] == j - 1:
            runs[-1] = (runs[-1][0], j)
        else:
            runs.append((j, j))
    return runs


def solve_level_set(
    r: int,
    y,
    depth: int,
    *,
    cell_cap: int = CELL_CAP,
    use_compiled: bool | None = None,
) -> LevelSetReport:
    """Branch-and-bound enclosure of the level set at height ``y``.

    Starting from ``[0, 1]``, every cell is split into ``r`` children and a
    child survives iff ``y`` lies in its closed enclosure.  Every solution
    therefore stays inside a surviving cell at every depth.
    """
    check_base(r)
    if not 0 <= depth <= DEPTH_CAP:
        raise CapExceeded(f"depth must be in 0..{DEPTH_CAP}")
    y = Fraction(y)
    cells = [(0, 0, 0)]
    top = enclosure(r, 0, 0)
    if y not in top:
        cells = []
    history = [len(cells)]
    for level in range(depth):
        if not cells:
            break
        cells = kernels.refine_cells(r, level, cells, y.numerator, y.denominator, use_compiled=use_compiled)
        if len(cells) > cell_cap:
            raise CapExceeded(f"{len(cells)} cells at depth {level + 1} exceed the cap {cell_cap}")
        history.append(len(cells))
    idx = tuple(j for j, _, _ in cells)
    return LevelSetReport(y, r, depth, idx, len(_runs(idx)), not idx, tuple(history))


def level_points(r: int, y, depth: int) -> list[RAdic]:
    """Every grid point ``k / r^depth`` with ``T_r = y`` (exact, exhaustive over surviving cells)."""
    rep = solve_level_set(r, y, depth)
    y = Fraction(y)
    pts = set()
    for j in rep.cell_indices:
        for k in (j, j + 1):
            x = RAdic(k, depth, r)
            if eval_exact(x) == y:
                pts.add(x)
    return sorted(pts)


@dataclass(frozen=True)
class NLocReport:
    y: Fraction
    r: int
    max_order: int
    count: int
    contributing_humps: tuple[Hump, ...] = field(repr=False)

    def to_dict(self) -> dict:
        return {
            "y": _fmt(self.y),
            "r": self.r,
            "max_order": self.max_order,
            "count": self.count,
            "humps": [
                {"x0": _fmt(h.x0.value), "order": h.order, "generation": h.generation}
                for h in self.contributing_humps
            ],
        }


def n_loc_truncated(r: int, y, M: int) -> NLocReport:
    """Count leading humps of order ``<= M`` whose truncated projection holds ``y``.

    A lower bound on the number of local level sets at height ``y``; humps
    of higher order are not visited.  Closed intervals: endpoint ties count.
    """
    check_base(r)
    if not 0 <= M <= ORDER_CAP:
        raise CapExceeded(f"order must be in 0..{ORDER_CAP}")
    y = Fraction(y)
    hits = tuple(h for h in leading_humps(r, M) if y in h.trunc_y)
    return NLocReport(y, r, M, len(hits), hits)


@dataclass(frozen=True)
class LocalPart:
    label: RAdic
    members: frozenset[RAdic]


def partition_local(points) -> list[LocalPart]:
    """Group points into local classes; each part is labelled by its smallest member."""
    pts = sorted({as_radic(p) for p in points})
    if len({p.base for p in pts}) > 1:
        raise ValueError("points use different bases")
    parts: list[list[RAdic]] = []
    for p in pts:
        for part in parts:
            if local_equiv(part[0], p):
                part.append(p)
                break
        else:
            parts.append([p])
    return [LocalPart(part[0], frozenset(part)) for part in parts]


def _digits_of(x: Fraction, r: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        x *= r
        e = x.numerator // x.denominator
        out.append(e)
        x -= e
    return out


def _first_zero(digits: list[int], r: int) -> int:
    half = r // 2
    d = 0
    for j, e in enumerate(digits, 1):
        d += 1 if e < half else -1
        if d == 0:
            return j
    return 0


def generation_one_interval(r: int, x, max_order: int) -> RAdic | None:
    """The generation-1 balanced ``x0`` of order ``<= max_order`` with ``x`` in ``I(x0)``."""
    x = Fraction(x)
    z = _first_zero(_digits_of(x, r, 2 * max_order), r)
    if z:
        return RAdic.from_fraction(Fraction(int(x * r**z), r**z), r)
    # right endpoints x = x0 + r^-2m are missed by the digit scan
    for m in range(1, max_order + 1):
        w = Fraction(1, r ** (2 * m))
        x0 = x - w
        if x0 < 0 or (x0 * r ** (2 * m)).denominator != 1:
            continue
        if _first_zero(_digits_of(x0, r, 2 * m), r) == 2 * m:
            return RAdic.from_fraction(x0, r)
    return None


def eval_star(r: int, x, depth: int) -> Enclosure:
    """Enclosure of ``T_r`` with every generation-1 hump flattened to its base value."""
    check_base(r)
    x = Fraction(x)
    if not 0 <= x <= Fraction(1, 2):
        raise ValueError("x must lie in [0, 1/2]")
    x0 = generation_one_interval(r, x, depth)
    if x0 is not None:
        return Enclosure.point(eval_exact(x0))
    try:
        # exact whenever x is r-adic
        return Enclosure.point(eval_exact(RAdic.from_fraction(x, r)))
    except ValueError:
        pass
    j = min(int(x * r**depth), r**depth - 1)
    return enclosure(r, depth, j)


def last_zero_truncation(x: RAdic) -> tuple[RAdic, int]:
    """Cut the tail-padded expansion of ``x`` at its last deficiency zero; returns ``(x0, order)``."""
    r = x.base
    if x.depth == 0:
        return RAdic(0, 0, r), 0
    ds = x.digits()
    d = deficiency_profile(ds)[-1]
    ds = ds.padded(ds.depth + max(0, -d))
    zeros = [j for j, v in enumerate(deficiency_profile(ds), 1) if v == 0]
    z = zeros[-1] if zeros else 0
    return RAdic(ds.numerator() // r ** (ds.depth - z), z, r), z // 2
