"""Self-check suites behind ``tvdw verify``.

Each suite returns a :class:`SuiteResult` with a check counter, a failure
counter and the first few failing cases.  Randomized suites draw exact big
integers from ``random.Random(seed)`` so a seed fixes every case.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .digits import RAdic, as_radic, block_flip, flip_blocks, local_equiv, tail_padded
from .expectation import catalan_tail_analytic, catalan_tail_exact, expected_nloc_series, monte_carlo_nloc
from .humps import (
    binom,
    catalan,
    count_leading_mn,
    enumerate_balanced,
    enumerate_leading,
    hump_similarity_rhs,
    leading_table,
    make_hump,
)
from .takagi import eval_exact, self_affine_rhs


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: int = 0
    examples: list = field(default_factory=list)

    def record(self, ok: bool, case=None) -> None:
        self.checks += 1
        if not ok:
            self.failures += 1
            if len(self.examples) < 5:
                self.examples.append(str(case))

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return {"checks": self.checks, "failures": self.failures, "passed": self.passed, "examples": self.examples}


def random_radic(rng: random.Random, r: int, max_depth: int = 12) -> RAdic:
    d = rng.randint(1, max_depth)
    return RAdic(rng.randrange(r**d), d, r)


def random_balanced(rng: random.Random, r: int, m: int) -> RAdic:
    """Uniform over balanced strings of order ``m``: place the low digits, then fill."""
    half = r // 2
    low = set(rng.sample(range(2 * m), m))
    digits = [rng.randrange(half) if i in low else rng.randrange(half, r) for i in range(2 * m)]
    k = 0
    for e in digits:
        k = k * r + e
    return RAdic(k, 2 * m, r)


def random_flip(rng: random.Random, x: RAdic) -> RAdic:
    """A random member of the local class of ``x`` (random subset of block flips)."""
    if x.depth == 0:
        return x
    ds = tail_padded(x.digits())
    for a, b in flip_blocks(ds):
        if rng.random() < 0.5:
            ds = block_flip(ds, a, b)
    return as_radic(ds)


def check_symmetry(r: int, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"symmetry r={r}")
    for _ in range(count):
        x = random_radic(rng, r)
        res.record(eval_exact(x) == eval_exact(RAdic.from_fraction(1 - x.value, r)), x)
    return res


def check_cell_decomposition(r: int, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"cell decomposition r={r}")
    for _ in range(count):
        x = random_radic(rng, r)
        n = rng.randint(0, x.depth + 2)
        k = min(x.value * r**n // 1, r**n - 1)
        res.record(self_affine_rhs(x, n, int(k)) == eval_exact(x), (x, n))
    return res


def check_balanced_reflection(r: int, count: int, seed: int) -> SuiteResult:
    """``T(x0 + t) = T(x0 + r^-2m - t)`` on the interval of a balanced ``x0``."""
    rng = random.Random(seed)
    res = SuiteResult(f"balanced reflection r={r}")
    for _ in range(count):
        m = rng.randint(1, 4)
        x0 = random_balanced(rng, r, m)
        extra = rng.randint(0, 6)
        t = Fraction(rng.randint(0, r**extra), r ** (2 * m + extra))
        left = RAdic.from_fraction(x0.value + t, r)
        right = RAdic.from_fraction(x0.value + Fraction(1, r ** (2 * m)) - t, r)
        res.record(eval_exact(left) == eval_exact(right), (x0, t))
    return res


def check_block_flips(r: int, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"block flips r={r}")
    for _ in range(count):
        x = random_radic(rng, r)
        y = random_flip(rng, x)
        res.record(local_equiv(x, y) and eval_exact(x) == eval_exact(y), (x, y))
    return res


def check_hump_similarity(r: int, count: int, seed: int) -> SuiteResult:
    rng = random.Random(seed)
    res = SuiteResult(f"hump similarity r={r}")
    for _ in range(count):
        m = rng.randint(1, 4)
        hump = make_hump(random_balanced(rng, r, m))
        extra = rng.randint(0, 6)
        t = Fraction(rng.randint(0, r**extra), r ** (2 * m + extra))
        x = RAdic.from_fraction(hump.x0.value + t, r)
        res.record(eval_exact(x) == hump_similarity_rhs(hump, t), (hump.x0, t))
    return res


def suite_identities(bases=(2, 4, 6, 10), count: int = 2000, seed: int = 0) -> list[SuiteResult]:
    out = []
    for r in bases:
        for fn in (check_symmetry, check_cell_decomposition, check_balanced_reflection, check_block_flips, check_hump_similarity):
            out.append(fn(r, count, seed))
    return out


def suite_counts(max_m: int = 8, recurrence_m: int = 30) -> list[SuiteResult]:
    enum = SuiteResult("enumeration vs formula r=2")
    for m in range(max_m + 1):
        enum.record(len(enumerate_balanced(2, m)) == math.comb(2 * m, m), ("balanced", m))
        enum.record(len(enumerate_leading(2, m)) == catalan(m), ("leading", m))
        for n in range(m + 1):
            enum.record(len(enumerate_leading(2, m, n)) == count_leading_mn(2, m, n), (m, n))
    scaling = SuiteResult("scaling r=4,6")
    for r in (4, 6):
        for m in range(5):
            for n in range(m + 1):
                got = len(enumerate_leading(r, m, n))
                scaling.record(got == (r // 2) ** (2 * m - n) * count_leading_mn(2, m, n), (r, m, n))
    rec = SuiteResult("recurrences r=2")
    table = leading_table(recurrence_m)
    for m in range(1, recurrence_m + 1):
        rec.record(count_leading_mn(2, m, m) == 1, ("diagonal", m))
        if m >= 2:
            rec.record(count_leading_mn(2, m, 2) == count_leading_mn(2, m, 1), ("first two", m))
        for n in range(m + 1):
            rec.record(table[m][n] == count_leading_mn(2, m, n), ("table", m, n))
        if m < recurrence_m:
            for n in range(1, m + 1):
                lhs = count_leading_mn(2, m + 1, n + 2) + count_leading_mn(2, m, n)
                rec.record(lhs == count_leading_mn(2, m + 1, n + 1), ("step", m, n))
        alt = sum((-1) ** i * binom(m - i - 1, i) * catalan(m - i - 1) for i in range(m))
        rec.record(alt == 1, ("alternating", m))
    return [enum, scaling, rec]


def suite_series(bases=(2, 4, 10), M: int = 1024) -> list[SuiteResult]:
    out = []
    for r in bases:
        res = SuiteResult(f"series r={r} M={M}")
        rep = expected_nloc_series(r, M)
        res.record(rep.brackets(), "partial <= closed <= partial + tail")
        res.record(float(rep.tail_bound) <= rep.analytic_tail_bound(), "analytic tail bound")
        res.record(catalan_tail_exact(M) <= Fraction(catalan_tail_analytic(M)), "catalan tail")
        out.append(res)
    return out


def suite_mc(bases=(2, 4), orders=(0, 1, 2, 4), samples: int = 100_000, seed: int = 0, threads: int = 1) -> list[SuiteResult]:
    out = []
    for r in bases:
        for M in orders:
            res = SuiteResult(f"monte carlo r={r} M={M}")
            for s in (seed, seed + 1, seed + 2):
                rep = monte_carlo_nloc(r, M, samples, s, threads)
                res.record(rep.z_score <= 4, (s, rep.mean, rep.std_error))
            out.append(res)
    return out


SUITES = ("identities", "counts", "series", "mc")


def run(name: str, **kw) -> list[SuiteResult]:
    if name == "all":
        return [res for n in SUITES for res in run(n, **kw)]
    if name == "identities":
        return suite_identities(**{k: v for k, v in kw.items() if k in ("bases", "count", "seed")})
    if name == "counts":
        return suite_counts()
    if name == "series":
        return suite_series(**{k: v for k, v in kw.items() if k in ("bases", "M")})
    if name == "mc":
        return suite_mc(**{k: v for k, v in kw.items() if k in ("bases", "samples", "seed", "threads")})
    raise ValueError(f"unknown suite {name!r}")
