"""Kernel dispatch: the compiled core when importable, the pure-Python twin otherwise.

Set ``TVDW_PURE_PYTHON=1`` to force the fallback.  The compiled routines
work in 64-bit integers, so each wrapper first checks that the arguments
stay within range and otherwise routes to the big-integer Python version.
"""
from __future__ import annotations

import os

from . import _pykernels

try:
    if os.environ.get("TVDW_PURE_PYTHON") == "1":
        raise ImportError("pure Python requested")
    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "compiled" if _ckernels is not None else "python"

_I64_SAFE = 1 << 60


def _backend(use_compiled: bool | None):
    if use_compiled is None:
        use_compiled = _ckernels is not None
    if use_compiled and _ckernels is None:
        raise RuntimeError("compiled kernels are not available")
    return _ckernels if use_compiled else _pykernels


def scaled_value(k: int, N: int, r: int, *, use_compiled: bool | None = None) -> int:
    mod = _backend(use_compiled)
    if mod is _ckernels and r**N >= _I64_SAFE // max(N, 1):
        mod = _pykernels
    return mod.scaled_value(k, N, r)


def scaled_grid(r: int, N: int, *, use_compiled: bool | None = None) -> list[int]:
    mod = _backend(use_compiled)
    if mod is _ckernels and r**N >= _I64_SAFE // max(N, 1):
        mod = _pykernels
    return mod.scaled_grid(r, N)


def enumerate_codes(r: int, m: int, leading: bool = False, generation: int = -1, *, use_compiled: bool | None = None) -> list[int]:
    mod = _backend(use_compiled)
    if mod is _ckernels and r ** (2 * m) >= _I64_SAFE:
        mod = _pykernels
    return mod.enumerate_codes(r, m, leading, generation)


def refine_cells(r: int, level: int, cells: list, p: int, q: int, *, use_compiled: bool | None = None) -> list:
    mod = _backend(use_compiled)
    if mod is _ckernels:
        # |A| <= r**(level+1), |D| <= level+1, so every product is bounded by this
        bound = (2 * r * r) * max(abs(p), q, 1) * r ** (level + 1) * (level + 4) * 4
        if bound >= _I64_SAFE:
            mod = _pykernels
    return mod.refine_cells(r, level, cells, p, q)


def class_census(r: int, N: int, *, use_compiled: bool | None = None) -> dict:
    mod = _backend(use_compiled)
    keyspace = 2 ** (N + 1) * (r // 2) ** N
    if mod is _ckernels and (r**N >= _I64_SAFE // (N + 1) or N > 30 or keyspace > 1 << 28):
        mod = _pykernels
    return mod.class_census(r, N)
