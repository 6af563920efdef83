"""Expected number of local level sets and expected level-set cardinality.

With ``y`` uniform on ``[0, M_r]`` each leading hump of order ``m`` contributes
its membership probability ``(r^2 - 1) / r^(2m+2)``.  Grouping the humps by
generation ``n`` gives

    E = sum_n (r^2 - 1) / r^(n+2) * S_n,    S_n = sum_{m >= n} 2^-(2m-n) card2(m, n),

where ``card2`` is the r = 2 leading count.  Everything here is exact except
the Monte Carlo estimator.
"""
from __future__ import annotations

import csv
import functools
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .digits import check_base
from .humps import CapExceeded, enumerate_leading, leading_rows
from .takagi import max_value

SERIES_CAP = 20_000
MC_ORDER_CAP = 12
MC_CHUNK = 1 << 16
#: ``C_m / 4^m < 1 / (sqrt(pi) m^1.5)`` bounds the Catalan tail past M by ``2 / sqrt(pi M)``.
CATALAN_TAIL_CONST = 1.13


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@functools.lru_cache(maxsize=4)
def s_numerators(M: int) -> tuple[int, ...]:
    """``a[n]`` with ``S_n(M) = a[n] * 2^n / 4^M`` for ``n = 0..M``.

    Horner over the orders: after row ``m`` the accumulator holds
    ``sum_{k <= m} card2(k, n) 4^(m-k)``.
    """
    if not 0 <= M <= SERIES_CAP:
        raise CapExceeded(f"M must be in 0..{SERIES_CAP}")
    acc = np.zeros(M + 1, dtype=object)
    acc[:] = 0
    for m, row in leading_rows(M):
        acc[: m + 1] *= 4
        acc[: m + 1] += np.array(row, dtype=object)
    return tuple(int(a) for a in acc)


def s_n_partial(n: int, M: int) -> Fraction:
    """``S_n`` truncated at order ``M``: ``sum_{m=n}^{M} 2^-(2m-n) card2(m, n)``."""
    if n < 0 or n > M:
        raise ValueError(f"need 0 <= n <= M, got n={n}, M={M}")
    return Fraction(s_numerators(M)[n] << n, 4**M)


def catalan_mass(M: int) -> Fraction:
    """``sum_{m <= M} C_m / 4^m`` (tends to 2)."""
    acc, c = 0, 1
    for m in range(M + 1):
        acc = acc * 4 + c
        c = c * 2 * (2 * m + 1) // (m + 2)
    return Fraction(acc, 4**M)


def central_binomial_mass(M: int) -> Fraction:
    """``sum_{m <= M} C(2m, m) / 4^m`` (diverges like ``2 sqrt(M / pi)``)."""
    acc, b = 0, 1
    for m in range(M + 1):
        acc = acc * 4 + b
        b = b * 2 * (2 * m + 1) // (m + 1)
    return Fraction(acc, 4**M)


def catalan_tail_exact(M: int) -> Fraction:
    return 2 - catalan_mass(M)


def catalan_tail_analytic(M: int) -> float:
    if M < 1:
        raise ValueError("M must be positive")
    return CATALAN_TAIL_CONST / math.sqrt(M)


@dataclass(frozen=True)
class SeriesReport:
    r: int
    M: int
    partial: Fraction
    closed_form: Fraction
    tail_bound: Fraction

    @property
    def gap(self) -> Fraction:
        return self.closed_form - self.partial

    def analytic_tail_bound(self) -> float:
        return (self.r**2 - 1) / self.r**2 * catalan_tail_analytic(self.M)

    def brackets(self) -> bool:
        return self.partial <= self.closed_form <= self.partial + self.tail_bound

    def to_dict(self, as_float: bool = False) -> dict:
        fmt = float if as_float else _frac_str
        return {
            "r": self.r,
            "M": self.M,
            "partial": fmt(self.partial),
            "closed_form": fmt(self.closed_form),
            "tail_bound": fmt(self.tail_bound),
            "brackets": self.brackets(),
        }


def _series_tail(r: int, M: int) -> Fraction:
    # each order-m term is at most C_m (r^2-1) / (4^m r^2)
    return Fraction(r * r - 1, r * r) * catalan_tail_exact(M)


def expected_nloc_series(r: int, M: int) -> SeriesReport:
    """Exact truncated series for the expected number of local level sets."""
    check_base(r)
    # S_n / r^n = a[n] / (h^n 4^M); Horner collects sum_n a[n] h^(M-n)
    h = r // 2
    num = 0
    for a_n in s_numerators(M):
        num = num * h + a_n
    partial = Fraction((r * r - 1) * num, r * r * 4**M * h**M)
    return SeriesReport(r, M, partial, Fraction(r + 1, r), _series_tail(r, M))


def expected_nloc_by_orders(r: int, M: int) -> Fraction:
    """The same truncated series summed hump-order first (independent route)."""
    check_base(r)
    h = r // 2
    acc = 0
    for m, row in leading_rows(M):
        weight = 0
        for c in row:  # Horner gives sum_n row[n] h^(m-n); times h^m below
            weight = weight * h + c
        acc = acc * r * r + weight * h**m
    return Fraction((r * r - 1) * acc, r ** (2 * M + 2))


def expected_cardinality_partial(r: int, M: int) -> Fraction:
    """``2 (r^2 - 1) / r^2 * sum_{m <= M} C(2m, m) / 4^m``: every hump weighted twice."""
    check_base(r)
    return 2 * Fraction(r * r - 1, r * r) * central_binomial_mass(M)


def convergence_trace(r: int, Ms) -> list[tuple[int, Fraction, Fraction]]:
    """``(M, partial, tail_bound)`` at each requested truncation, in one pass."""
    check_base(r)
    Ms = sorted(set(Ms))
    if not Ms:
        return []
    h = r // 2
    out = []
    acc, want = 0, iter(Ms)
    target = next(want)
    for m, row in leading_rows(Ms[-1]):
        weight = 0
        for c in row:
            weight = weight * h + c
        acc = acc * r * r + weight * h**m
        while m == target:
            partial = Fraction((r * r - 1) * acc, r ** (2 * m + 2))
            out.append((m, partial, _series_tail(r, m)))
            target = next(want, None)
    return out


def trace_csv(rows, as_float: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "partial", "tail_bound"])
    fmt = float if as_float else _frac_str
    for M, partial, tail in rows:
        w.writerow([M, fmt(partial), fmt(tail)])
    return buf.getvalue()


@functools.lru_cache(maxsize=16)
def _truncated_bounds(r: int, M: int) -> tuple[list[int], list[int], int]:
    """Sorted ``lo`` and ``hi`` of every leading truncated projection, scaled by ``2 r^(2M)``."""
    if not 0 <= M <= MC_ORDER_CAP:
        raise CapExceeded(f"M must be in 0..{MC_ORDER_CAP}")
    scale = 2 * r ** (2 * M)
    lo, hi = [], []
    for m in range(M + 1):
        unit = r ** (2 * (M - m))
        for x in enumerate_leading(r, m):
            base = kernels.scaled_value(x.numerator * r ** (2 * m - x.depth), 2 * m, r)
            lo.append(2 * base * unit)
            hi.append(2 * base * unit + unit)
    return sorted(lo), sorted(hi), scale


@dataclass(frozen=True)
class MCReport:
    r: int
    M: int
    samples: int
    seed: int
    mean: float
    std_error: float
    exact_truncated_mean: Fraction

    @property
    def z_score(self) -> float:
        if self.std_error == 0:
            return 0.0 if self.mean == float(self.exact_truncated_mean) else math.inf
        return abs(self.mean - float(self.exact_truncated_mean)) / self.std_error

    def to_dict(self, as_float: bool = False) -> dict:
        exact = float(self.exact_truncated_mean) if as_float else _frac_str(self.exact_truncated_mean)
        return {
            "r": self.r,
            "M": self.M,
            "samples": self.samples,
            "seed": self.seed,
            "mean": self.mean,
            "std_error": self.std_error,
            "exact_truncated_mean": exact,
            "z_score": self.z_score,
        }


def sample_counts(r: int, M: int, ys: np.ndarray) -> np.ndarray:
    """Exact truncated-hump count at every float sample ``y``.

    ``lo <= y <= hi`` is decided on the integer grid ``2 r^(2M)``: with
    ``Y = y * scale`` this is ``lo <= floor(Y)`` and ``hi >= ceil(Y)``.
    """
    lo, hi, scale = _truncated_bounds(r, M)
    if scale & (scale - 1) == 0 and scale < 1 << 52:
        # power-of-two scale: the float product is exact
        Y = ys * float(scale)
        fl = np.floor(Y).astype(np.int64)
        cl = np.ceil(Y).astype(np.int64)
        lo_a = np.asarray(lo, dtype=np.int64)
        hi_a = np.asarray(hi, dtype=np.int64)
        return np.searchsorted(lo_a, fl, "right") - np.searchsorted(hi_a, cl, "left")
    import bisect

    out = np.empty(len(ys), dtype=np.int64)
    for i, y in enumerate(ys):
        Y = Fraction(float(y)) * scale
        fl = Y.numerator // Y.denominator
        cl = -((-Y.numerator) // Y.denominator)
        out[i] = bisect.bisect_right(lo, fl) - bisect.bisect_left(hi, cl)
    return out


def _chunk(r: int, M: int, seed_seq: np.random.SeedSequence, size: int) -> tuple[int, int]:
    rng = np.random.default_rng(seed_seq)
    ys = rng.random(size) * float(max_value(r))
    c = sample_counts(r, M, ys)
    return int(c.sum()), int((c * c).sum())


def monte_carlo_nloc(r: int, M: int, samples: int, seed: int = 0, threads: int = 1) -> MCReport:
    """Monte Carlo estimate of the truncated expected count, ``y`` uniform on ``[0, M_r]``.

    Samples are drawn in fixed chunks with one spawned sub-seed each, so the
    report depends only on ``(r, M, samples, seed)`` and not on ``threads``.
    """
    check_base(r)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    _truncated_bounds(r, M)  # build (and cap-check) once before fanning out
    n_chunks = -(-samples // MC_CHUNK)
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [MC_CHUNK] * (n_chunks - 1) + [samples - MC_CHUNK * (n_chunks - 1)]
    jobs = list(zip(seqs, sizes))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: _chunk(r, M, *job), jobs))
    else:
        parts = [_chunk(r, M, *job) for job in jobs]
    s1 = sum(p[0] for p in parts)
    s2 = sum(p[1] for p in parts)
    mean = Fraction(s1, samples)
    if samples > 1:
        var = Fraction(s2 * samples - s1 * s1, samples * (samples - 1))
        se = math.sqrt(var / samples)
    else:
        se = math.inf
    return MCReport(r, M, samples, seed, float(mean), se, expected_nloc_series(r, M).partial)
