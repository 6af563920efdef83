"""Acceptance checks at their stated tolerances.

Each check returns ``(ok, detail)``; the pytest wrapper records a PASS/FAIL
line per criterion (shown in the terminal summary) and then asserts.
Run directly with ``python tests/test_acceptance.py`` for the lines alone.
"""
import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from tvdw import kernels, verify  # noqa: E402
from tvdw.digits import RAdic  # noqa: E402
from tvdw.expectation import (  # noqa: E402
    catalan_mass,
    expected_cardinality_partial,
    expected_nloc_series,
    monte_carlo_nloc,
    s_n_partial,
)
from tvdw.humps import (  # noqa: E402
    catalan,
    count_leading_mn,
    enumerate_balanced,
    enumerate_leading,
    make_hump,
)
from tvdw.levelsets import solve_level_set  # noqa: E402
from tvdw.takagi import eval_exact, level_witnesses, max_value  # noqa: E402

F = Fraction
RESULTS: list[str] = []


def ballot(m, n):
    if m == n == 0:
        return 1
    if not 1 <= n <= m:
        return 0
    return n * math.comb(2 * m - n, m) // (2 * m - n)


def c1_counting():
    bad = []
    for m in range(9):
        if len(enumerate_balanced(2, m)) != math.comb(2 * m, m):
            bad.append(("humps", m))
        if len(enumerate_leading(2, m)) != catalan(m):
            bad.append(("leading", m))
        for n in range(m + 1):
            got = len(enumerate_leading(2, m, n))
            if not got == count_leading_mn(2, m, n) == ballot(m, n):
                bad.append((m, n, got))
    for m in range(1, 31):
        if count_leading_mn(2, m, m) != 1:
            bad.append(("diagonal", m))
        for n in range(1, m + 1):
            if count_leading_mn(2, m + 1, n + 2) + count_leading_mn(2, m, n) != count_leading_mn(2, m + 1, n + 1):
                bad.append(("recurrence", m, n))
    return not bad, f"mismatches={bad[:3]}"


def c2_scaling():
    bad = []
    for r in (4, 6):
        for m in range(5):
            for n in range(m + 1):
                got = len(enumerate_leading(r, m, n))
                if got != (r // 2) ** (2 * m - n) * count_leading_mn(2, m, n):
                    bad.append((r, m, n, got))
    return not bad, f"mismatches={bad[:3]}"


def c3_identities():
    checks = failures = 0
    for r in (2, 4, 6, 10):
        for fn in (verify.check_symmetry, verify.check_cell_decomposition,
                   verify.check_balanced_reflection, verify.check_block_flips):
            res = fn(r, 10_000, seed=r)
            checks += res.checks
            failures += res.failures
    return failures == 0, f"checks={checks} failures={failures}"


def c4_membership():
    bad = 0
    total = 0
    for r in (2, 4):
        for m in range(5):
            for x in enumerate_balanced(r, m):
                h = make_hump(x)
                total += 1
                bad += h.trunc_y.width / max_value(r) != F(r * r - 1, r ** (2 * m + 2))
    return bad == 0, f"humps={total} bad={bad}"


def c5_series():
    ok, parts = True, []
    for r in (2, 4, 10):
        rep = expected_nloc_series(r, 4096)
        gap = F(r + 1, r) - rep.partial
        ok &= abs(gap) <= F(2, 100) and rep.brackets()
        parts.append(f"r={r} gap={float(gap):.5f}")
    return ok, " ".join(parts)


def c6_s_n():
    devs = [abs(float(s_n_partial(n, 4096)) - 1) for n in range(7)]
    bad = [n for n, d in enumerate(devs) if d > 0.02]
    return not bad, "devs=" + ",".join(f"{d:.4f}" for d in devs) + f" over_tolerance_n={bad}"


def c7_catalan():
    err = abs(float(catalan_mass(10**4)) - 2)
    return err <= 0.012, f"error={err:.6f}"


def c8_divergence():
    M = 10**4
    ratio = float(expected_cardinality_partial(2, M)) / (2 * 0.75 * 2 * math.sqrt(M / math.pi))
    return 0.95 <= ratio <= 1.05, f"ratio={ratio:.6f}"


def c9_monte_carlo():
    worst, runs = 0.0, 0
    for r in (2, 4):
        for M in (0, 1, 2, 4):
            for seed in (0, 1, 2):
                rep = monte_carlo_nloc(r, M, 100_000, seed)
                worst = max(worst, rep.z_score)
                runs += 1
    return worst <= 4, f"runs={runs} max_z={worst:.3f}"


def c10_solver():
    missed, empty_bad, solves = [], 0, 0
    for r in (2, 4, 6, 10):
        rng = random.Random(1000 + r)
        for _ in range(1000):
            N = rng.randint(1, 8)
            x = RAdic(rng.randrange(r**N + 1), N, r)
            y = eval_exact(x)
            for d in range(11):
                solves += 1
                if not solve_level_set(r, y, d).covers(x.value):
                    missed.append((r, x, d))
        for _ in range(50):
            y = max_value(r) + F(rng.randrange(1, 10**6), 10**6)
            empty_bad += not solve_level_set(r, y, rng.randint(0, 10)).certified_empty
    return not missed and not empty_bad, f"solves={solves} missed={len(missed)} non_empty_above_max={empty_bad}"


def c11_local_classes():
    rows = []
    ok = True
    for r, top in ((2, 12), (4, 12)):
        for N in range(1, top + 1):
            rep = kernels.class_census(r, N)
            ok &= rep["covered"] == rep["strings"] == r**N
            ok &= rep["unsound"] == rep["incomplete"] == rep["value_mismatch"] == 0
        rows.append(f"r={r} depth<={top} classes@{top}={rep['classes']}")
    return ok, " ".join(rows)


def c12_witnesses():
    bad = 0
    for r in (2, 4, 6, 10):
        rng = random.Random(r)
        for _ in range(100):
            N = rng.randint(1, 10)
            x = RAdic(rng.randrange(1, r**N), N, r)
            w = level_witnesses(x, 10)
            bad += len(set(w)) != 10 or len({eval_exact(p) for p in w}) != 1
    return bad == 0, f"points=400 bad={bad}"


CRITERIA = [
    (1, "counting exactness", c1_counting),
    (2, "scaling r=4,6", c2_scaling),
    (3, "analytic identities", c3_identities),
    (4, "membership probability", c4_membership),
    (5, "expectation series M=4096", c5_series),
    (6, "S_n constancy M=4096", c6_s_n),
    (7, "Catalan mass", c7_catalan),
    (8, "cardinality growth", c8_divergence),
    (9, "Monte Carlo consistency", c9_monte_carlo),
    (10, "solver soundness", c10_solver),
    (11, "local-level-set structure", c11_local_classes),
    (12, "level-set witnesses", c12_witnesses),
]


def _run(num, name, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'} {name}: {detail} ({time.perf_counter() - t0:.1f}s)"
    RESULTS.append(line)
    print(line)
    return ok, line


@pytest.mark.acceptance
@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, name, fn):
    ok, line = _run(num, name, fn)
    assert ok, line


if __name__ == "__main__":
    results = [_run(*c)[0] for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
