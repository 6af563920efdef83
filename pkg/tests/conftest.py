import os
import sys
from fractions import Fraction

import pytest
from hypothesis import settings

from tvdw import kernels

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("quick", max_examples=40, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))


BACKENDS = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])


@pytest.fixture(params=BACKENDS)
def use_compiled(request):
    return request.param == "compiled"


def oracle_takagi(x, r, terms=64):
    """Direct series with Fraction arithmetic, no library code.

    Exact for ``x = k / r^N`` with ``N <= terms``: later terms vanish.
    """
    x = Fraction(x)
    total = Fraction(0)
    for n in range(terms):
        t = x * r**n
        frac = t - (t.numerator // t.denominator)
        if frac == 0:
            break
        total += min(frac, 1 - frac) / r**n
    return total


def oracle_digits(k, N, r):
    return [(k // r ** (N - 1 - j)) % r for j in range(N)]


def oracle_deficiency(digits, r):
    out, d = [], 0
    for e in digits:
        d += 1 if e < r // 2 else -1
        out.append(d)
    return out


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
