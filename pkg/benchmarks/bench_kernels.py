"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row reports the best wall time per backend and the speedup.  Results
from the two backends are compared for equality before timing.
"""
import argparse
import timeit
from fractions import Fraction

from tvdw import kernels


def _solve(r, y, depth, use_compiled):
    cells = [(0, 0, 0)]
    for level in range(depth):
        cells = kernels.refine_cells(r, level, cells, y.numerator, y.denominator, use_compiled=use_compiled)
    return cells


def cases(quick: bool):
    scale = 0 if quick else 1
    return [
        ("scaled_grid r=2 N=%d" % (14 + 4 * scale), lambda c, n=14 + 4 * scale: kernels.scaled_grid(2, n, use_compiled=c)),
        ("scaled_grid r=10 N=%d" % (4 + scale), lambda c, n=4 + scale: kernels.scaled_grid(10, n, use_compiled=c)),
        ("enumerate_codes r=2 m=%d" % (8 + 2 * scale), lambda c, m=8 + 2 * scale: kernels.enumerate_codes(2, m, use_compiled=c)),
        ("enumerate_codes r=4 m=%d leading" % (5 + scale),
         lambda c, m=5 + scale: kernels.enumerate_codes(4, m, True, use_compiled=c)),
        ("refine_cells r=2 y=21/32 depth=%d" % (20 + 8 * scale),
         lambda c, d=20 + 8 * scale: _solve(2, Fraction(21, 32), d, c)),
        ("refine_cells r=4 y=1/4 depth=%d" % (14 + 6 * scale),
         lambda c, d=14 + 6 * scale: _solve(4, Fraction(1, 4), d, c)),
        ("class_census r=2 N=%d" % (12 + 4 * scale), lambda c, n=12 + 4 * scale: kernels.class_census(2, n, use_compiled=c)),
        ("class_census r=4 N=%d" % (8 + 2 * scale), lambda c, n=8 + 2 * scale: kernels.class_census(4, n, use_compiled=c)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)
    if kernels.BACKEND != "compiled":
        print("compiled extension not built; only the Python fallback is available")
    print(f"{'kernel':40s} {'python s':>10s} {'compiled s':>11s} {'speedup':>8s}")
    for name, fn in cases(args.quick):
        py = min(timeit.repeat(lambda: fn(False), number=1, repeat=args.repeat))
        if kernels.BACKEND == "compiled":
            if fn(True) != fn(False):
                raise SystemExit(f"backends disagree on {name}")
            cc = min(timeit.repeat(lambda: fn(True), number=1, repeat=args.repeat))
            print(f"{name:40s} {py:10.4f} {cc:11.4f} {py / cc:7.1f}x")
        else:
            print(f"{name:40s} {py:10.4f} {'-':>11s} {'-':>8s}")


if __name__ == "__main__":
    main()
