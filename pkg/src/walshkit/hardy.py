"""Dyadic maximal function and exact H1 norms.

For a resolution-``N`` cylinder function the dyadic averages of rank
``k >= N`` all equal the function itself, so the supremum defining ``f*``
is a maximum over ``k = 0..N`` and the H1 norm is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .dyadic import DyadicRational, Grid1D, Grid2D, l1_norm, lp_norm
from .walsh import dyadic_averages_1d, dyadic_averages_2d

__all__ = [
    "HardyReport",
    "maximal_function_1d",
    "maximal_function_2d",
    "h1_norm_1d",
    "h1_norm_2d",
    "hp_norm",
]


@dataclass(frozen=True)
class HardyReport:
    l1: DyadicRational
    h1: DyadicRational
    maximal_grid: Union[Grid1D, Grid2D]

    def as_dict(self) -> dict:
        return {"l1": str(self.l1), "h1": str(self.h1), "h1_float": float(self.h1)}


def _cellwise_abs_max(grids):
    e = max(g.exponent for g in grids)
    stacked = [np.abs(g.aligned_values(e)) for g in grids]
    out = stacked[0]
    for s in stacked[1:]:
        out = np.maximum(out, s)
    return type(grids[0])(out, e)


def maximal_function_1d(f: Grid1D) -> Grid1D:
    return _cellwise_abs_max(dyadic_averages_1d(f))


def maximal_function_2d(f: Grid2D) -> Grid2D:
    """``f*(x, y) = max_k |S_{2^k, 2^k} f(x, y)|`` over ``k = 0..N``."""
    return _cellwise_abs_max(dyadic_averages_2d(f))


def h1_norm_1d(f: Grid1D) -> HardyReport:
    star = maximal_function_1d(f)
    return HardyReport(l1=l1_norm(f), h1=l1_norm(star), maximal_grid=star)


def h1_norm_2d(f: Grid2D) -> HardyReport:
    star = maximal_function_2d(f)
    return HardyReport(l1=l1_norm(f), h1=l1_norm(star), maximal_grid=star)


def hp_norm(f: Union[Grid1D, Grid2D], p: float) -> float:
    """Floating-point ``||f*||_p``; no exactness is claimed for ``p != 1``."""
    star = maximal_function_1d(f) if isinstance(f, Grid1D) else maximal_function_2d(f)
    return lp_norm(star, p)
