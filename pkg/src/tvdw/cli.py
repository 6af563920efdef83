"""Command-line front end: ``tvdw <subcommand> [flags]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage error.
Machine output (JSON/CSV) renders rationals as exact ``"p/q"`` strings
unless ``--float`` is given.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import verify
from .digits import RAdic, check_base
from .expectation import SERIES_CAP, convergence_trace, expected_nloc_series, monte_carlo_nloc, trace_csv
from .humps import CapExceeded, census, enumerate_balanced, make_hump
from .kernels import scaled_grid
from .levelsets import DEPTH_CAP, ORDER_CAP, n_loc_truncated, solve_level_set
from .takagi import eval_exact, eval_partial, tail_bound

GRAPH_POINT_CAP = 1 << 20
CENSUS_ORDER_CAP = 2000
MC_SAMPLE_CAP = 10**8
EVAL_DEPTH_DEFAULT = 40


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    r: int
    fmt: str | None
    out: str | None
    as_float: bool
    seed: int
    threads: int


_POWER = re.compile(r"^\s*(-?\d+)\s*/\s*(\d+)\s*\^\s*(\d+)\s*$")


def parse_rational(text: str) -> Fraction:
    """``"a/b"``, ``"k/r^N"`` or a decimal string."""
    m = _POWER.match(text)
    try:
        if m:
            return Fraction(int(m.group(1)), int(m.group(2)) ** int(m.group(3)))
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse {text!r} as a rational") from exc


def fmt_q(q: Fraction, as_float: bool = False):
    if as_float:
        return float(q)
    return f"{q.numerator}/{q.denominator}"


def _emit(cfg: RunConfig, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def _cap(name: str, value: int, hi: int, lo: int = 0) -> int:
    if not lo <= value <= hi:
        raise UsageError(f"--{name} must be in {lo}..{hi}, got {value}")
    return value


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name} is required for {args.command}")


def cmd_eval(args, cfg: RunConfig) -> int:
    _require(args, "x")
    x = parse_rational(args.x)
    if not 0 <= x <= 1:
        raise UsageError("x must lie in [0, 1]")
    try:
        value = eval_exact(RAdic.from_fraction(x, cfg.r))
        exact = True
    except ValueError:
        exact = False
    if exact:
        if cfg.fmt == "json":
            _emit(cfg, _json({"r": cfg.r, "x": fmt_q(x), "value": fmt_q(value, cfg.as_float), "exact": True}))
        else:
            _emit(cfg, str(float(value)) if cfg.as_float else str(value))
        return 0
    depth = args.depth if args.depth is not None else EVAL_DEPTH_DEFAULT
    _cap("depth", depth, 4096)
    partial, err = eval_partial(x, depth, cfg.r), tail_bound(depth, cfg.r)
    if cfg.fmt == "json":
        _emit(cfg, _json({
            "r": cfg.r, "x": fmt_q(x), "depth": depth, "partial": fmt_q(partial, cfg.as_float),
            "tail_bound": fmt_q(err, cfg.as_float), "exact": False,
        }))
    else:
        p, e = (float(partial), float(err)) if cfg.as_float else (partial, err)
        _emit(cfg, f"{p} +- {e}")
    return 0


def cmd_graph_data(args, cfg: RunConfig) -> int:
    _require(args, "depth")
    depth = _cap("depth", args.depth, 64)
    if cfg.r**depth > GRAPH_POINT_CAP:
        raise UsageError(f"r^depth exceeds the point cap {GRAPH_POINT_CAP}")
    den = cfg.r**depth
    values = scaled_grid(cfg.r, depth)
    points = [(Fraction(k, den), Fraction(v, den)) for k, v in enumerate(values)]
    humps = []
    if args.order is not None:
        _cap("order", args.order, 8)
        humps = [make_hump(x) for x in enumerate_balanced(cfg.r, args.order)]
    f = lambda q: fmt_q(q, cfg.as_float)  # noqa: E731
    if cfg.fmt == "json":
        _emit(cfg, _json({
            "r": cfg.r,
            "depth": depth,
            "points": [[f(x), f(y)] for x, y in points],
            "humps": [
                {"x0": f(h.x0.value), "x": [f(q) for q in h.x_interval], "y": [f(q) for q in h.y_interval]}
                for h in humps
            ],
        }))
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "x", "y", "x_hi", "y_hi"])
    for x, y in points:
        w.writerow(["point", f(x), f(y), "", ""])
    for h in humps:
        (xa, xb), (ya, yb) = h.x_interval, h.y_interval
        w.writerow(["hump", f(xa), f(ya), f(xb), f(yb)])
    _emit(cfg, buf.getvalue())
    return 0


def cmd_census(args, cfg: RunConfig) -> int:
    _require(args, "order")
    c = census(cfg.r, _cap("order", args.order, CENSUS_ORDER_CAP))
    _emit(cfg, c.to_csv() if cfg.fmt == "csv" else _json({k: (str(v) if isinstance(v, int) and v > 2**53 else v)
                                                         for k, v in c.to_dict().items()}))
    return 0


def cmd_levelset(args, cfg: RunConfig) -> int:
    _require(args, "y", "depth")
    rep = solve_level_set(cfg.r, parse_rational(args.y), _cap("depth", args.depth, DEPTH_CAP))
    if cfg.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["lo", "hi"])
        for lo, hi in rep.cells:
            w.writerow([fmt_q(lo, cfg.as_float), fmt_q(hi, cfg.as_float)])
        _emit(cfg, buf.getvalue())
    else:
        _emit(cfg, _json(rep.to_dict()))
    return 0


def _order_flag(args) -> int:
    M = args.M if args.M is not None else args.order
    if M is None:
        raise UsageError(f"--M is required for {args.command}")
    return M


def cmd_nloc(args, cfg: RunConfig) -> int:
    _require(args, "y")
    rep = n_loc_truncated(cfg.r, parse_rational(args.y), _cap("M", _order_flag(args), ORDER_CAP))
    _emit(cfg, _json(rep.to_dict()))
    return 0


def cmd_series(args, cfg: RunConfig) -> int:
    M = _cap("M", _order_flag(args), SERIES_CAP)
    if cfg.fmt == "csv":
        marks = sorted({M} | {1 << k for k in range(M.bit_length()) if 1 << k <= M} | {0})
        _emit(cfg, trace_csv(convergence_trace(cfg.r, marks), cfg.as_float))
    else:
        _emit(cfg, _json(expected_nloc_series(cfg.r, M).to_dict(cfg.as_float)))
    return 0


def cmd_mc(args, cfg: RunConfig) -> int:
    M = _cap("M", _order_flag(args), 12)
    samples = _cap("samples", args.samples if args.samples is not None else 100_000, MC_SAMPLE_CAP, 1)
    rep = monte_carlo_nloc(cfg.r, M, samples, cfg.seed, cfg.threads)
    _emit(cfg, _json(rep.to_dict(cfg.as_float)))
    return 0


def cmd_verify(args, cfg: RunConfig) -> int:
    kw = {"seed": cfg.seed, "threads": cfg.threads}
    if args.r_given:
        kw["bases"] = (cfg.r,)
    if args.M is not None:
        kw["M"] = _cap("M", args.M, SERIES_CAP, 1)
    if args.samples is not None:
        kw["samples"] = _cap("samples", args.samples, MC_SAMPLE_CAP, 1)
    results = verify.run(args.suite, **kw)
    summary = {
        "suite": args.suite,
        "passed": all(res.passed for res in results),
        "checks": sum(res.checks for res in results),
        "failures": sum(res.failures for res in results),
        "results": {res.name: res.to_dict() for res in results},
    }
    _emit(cfg, _json(summary))
    return 0 if summary["passed"] else 1


COMMANDS = {
    "eval": cmd_eval,
    "graph-data": cmd_graph_data,
    "census": cmd_census,
    "levelset": cmd_levelset,
    "nloc": cmd_nloc,
    "series": cmd_series,
    "mc": cmd_mc,
    "verify": cmd_verify,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--r", type=int, default=None, help="even base r >= 2 (default 2)")
    common.add_argument("--x", help="point as a/b, k/r^N or a decimal")
    common.add_argument("--y", help="height as p/q or a decimal")
    common.add_argument("--depth", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("--M", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv"), dest="fmt")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--float", action="store_true", dest="as_float", help="render decimals instead of p/q")

    parser = _Parser(prog="tvdw", description="Exact tools for the Takagi-van der Waerden functions T_r.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eval", parents=[common], help="exact T_r(x), or a partial sum with error bound")
    sub.add_parser("graph-data", parents=[common], help="grid values of T_r, optionally with hump boxes")
    sub.add_parser("census", parents=[common], help="leading hump counts by generation")
    sub.add_parser("levelset", parents=[common], help="certified cell enclosure of a level set")
    sub.add_parser("nloc", parents=[common], help="leading truncated humps containing y")
    sub.add_parser("series", parents=[common], help="exact truncated expectation series")
    sub.add_parser("mc", parents=[common], help="Monte Carlo estimate of the truncated expectation")
    v = sub.add_parser("verify", parents=[common], help="run self-check suites")
    v.add_argument("suite", choices=verify.SUITES + ("all",))
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.r_given = args.r is not None
        r = 2 if args.r is None else args.r
        try:
            check_base(r)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        cfg = RunConfig(args.command, r, args.fmt, args.out, args.as_float, args.seed, args.threads)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, CapExceeded) as exc:
        print(f"tvdw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
