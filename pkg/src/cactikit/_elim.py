"""Elimination kernel selection: compiled extension when built, else pure Python."""
from __future__ import annotations

import os

from ._elim_py import invariant_factors as _invariant_factors_py
from ._elim_py import normalize_diagonal

try:
    if os.environ.get("CACTIKIT_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from ._elim_c import invariant_factors_int64 as _invariant_factors_c
    BACKEND = "cython"
except ImportError:
    _invariant_factors_c = None
    BACKEND = "python"


def invariant_factors(nrows: int, ncols: int, entries) -> list[int]:
    """Invariant factors of a sparse integer matrix given as (row, col, value) triplets.

    The compiled kernel works in checked 64-bit arithmetic and raises
    OverflowError on any overflow, in which case the exact bigint path reruns.
    """
    if _invariant_factors_c is not None:
        try:
            return normalize_diagonal(_invariant_factors_c(nrows, ncols, list(entries)))
        except OverflowError:
            pass
    return _invariant_factors_py(nrows, ncols, entries)
