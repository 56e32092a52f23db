"""Walsh-Dirichlet kernels and Lebesgue constants.

Three independent routes to ``D_n`` / ``||D_n||_1`` live here:

* :func:`dirichlet_direct` sums ``w_0, ..., w_{n-1}`` (the definition);
* :func:`dirichlet_recursive` peels the leading binary digit with
  ``D_{2^l + m} = D_{2^l} + w_{2^l} D_m`` starting from the closed form of
  ``D_{2^l}``;
* :func:`lebesgue_constants` tabulates the norms without any grid, using
  ``||D_{2^l + m}||_1 = 1 + ||D_m||_1 - m 2^-l`` for ``m < 2^l``.  On ``I_l``
  the kernel equals ``2^l + m r_l`` which integrates in absolute value to 1,
  and off ``I_l`` it coincides with ``D_m``, whose value on ``I_l`` is ``m``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .bitops import variation
from .dyadic import DyadicRational, Grid1D, ResolutionError, l1_norm
from .walsh import walsh_function

__all__ = [
    "LebesgueRecord",
    "minimal_resolution",
    "dirichlet_closed_form",
    "dirichlet_direct",
    "iter_dirichlet_direct",
    "dirichlet_recursive",
    "lebesgue_constant",
    "lebesgue_constants",
    "lebesgue_sweep",
]

# rows of the Walsh matrix materialized at once by dirichlet_direct
_CHUNK = 1024


@dataclass(frozen=True)
class LebesgueRecord:
    n: int
    variation: int
    constant: DyadicRational
    constant_float: float
    lower_ok: bool
    upper_ok: bool


def minimal_resolution(n: int) -> int:
    """Smallest ``N`` with ``2**N >= n`` (``D_n`` is resolution-``N`` measurable)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return max(n - 1, 0).bit_length()


def _check(n: int, resolution: int) -> None:
    if n < 0:
        raise ValueError(f"kernel index must be nonnegative, got {n}")
    if n > (1 << resolution):
        raise ResolutionError(f"D_{n} is not measurable at resolution {resolution}")


def dirichlet_closed_form(m: int, resolution: int) -> Grid1D:
    """``D_{2^m}``: the value ``2**m`` on ``I_m`` and zero elsewhere."""
    _check(1 << m, resolution)
    j = np.arange(1 << resolution, dtype=np.int64)
    return Grid1D(np.where(j % (1 << m) == 0, 1 << m, 0))


def dirichlet_direct(n: int, resolution: int) -> Grid1D:
    """``D_n = sum_{k<n} w_k`` evaluated cell by cell."""
    _check(n, resolution)
    j = np.arange(1 << resolution, dtype=np.int64)
    total = np.zeros(1 << resolution, dtype=np.int64)
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(n, start + _CHUNK), dtype=np.int64)
        odd = np.bitwise_count(k[:, None] & j[None, :]) & 1
        total += (k.size - 2 * odd.sum(axis=0, dtype=np.int64))
    return Grid1D(total)


def iter_dirichlet_direct(n_max: int, resolution: int) -> Iterator[tuple[int, Grid1D]]:
    """Yield ``(n, D_n)`` for ``n = 1..n_max`` by accumulating ``w_{n-1}``."""
    _check(n_max, resolution)
    total = np.zeros(1 << resolution, dtype=np.int64)
    for n in range(1, n_max + 1):
        total += walsh_function(n - 1, resolution).values
        yield n, Grid1D(total)


def dirichlet_recursive(n: int, resolution: int) -> Grid1D:
    """Build ``D_n`` from closed-form dyadic kernels by peeling leading digits."""
    _check(n, resolution)
    size = 1 << resolution
    j = np.arange(size, dtype=np.int64)
    # D_n = D_{2^l1} + w_{2^l1}(D_{2^l2} + w_{2^l2}(...)), innermost first
    digits = [k for k in range(n.bit_length()) if (n >> k) & 1]
    acc = np.zeros(size, dtype=np.int64)
    for l in digits:
        closed = np.where(j % (1 << l) == 0, 1 << l, 0)
        rad = 1 - 2 * ((j >> l) & 1)
        acc = closed + rad * acc
    return Grid1D(acc)


def lebesgue_constant(n: int) -> DyadicRational:
    """``||D_n||_1`` evaluated on the smallest sufficient grid."""
    if n < 1:
        raise ValueError(f"Lebesgue constant needs n >= 1, got {n}")
    return l1_norm(dirichlet_recursive(n, minimal_resolution(n)))


def lebesgue_constants(n_max: int) -> tuple[np.ndarray, int]:
    """Numerators of ``||D_n||_1 * 2**K`` for ``n = 0..n_max`` and the exponent ``K``.

    Entry 0 is ``D_0 = 0``.  Runs in O(n_max) without building any kernel.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    K = minimal_resolution(n_max)
    size = 1 << K
    if K >= 62:
        raise ValueError("n_max too large for the integer table")
    table = np.zeros(size + 1, dtype=np.int64)
    for l in range(K + 1):
        lo = 1 << l
        hi = min(lo << 1, size + 1)
        if lo > size:
            break
        m = np.arange(hi - lo, dtype=np.int64)
        table[lo:hi] = (1 << K) + table[m] - (m << (K - l))
    return table[: n_max + 1], K


def _sweep_chunk(lo: int, hi: int, K: int) -> list[DyadicRational]:
    """Norms of D_n for lo <= n < hi via the running definition sum."""
    acc = dirichlet_recursive(lo - 1, K).values.copy()
    out = []
    for n in range(lo, hi):
        acc += walsh_function(n - 1, K).values
        out.append(DyadicRational(int(np.abs(acc).sum()), K))
    return out


def lebesgue_sweep(n_max: int, threads: int | None = None
                   ) -> tuple[list[LebesgueRecord], list[DyadicRational]]:
    """Lebesgue records for ``n = 1..n_max`` plus running sums of the norms.

    Kernels are built on one common grid of resolution ``ceil(log2 n_max)``;
    the L1 norm does not depend on the grid once the kernel is measurable.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    K = minimal_resolution(n_max)
    threads = max(1, threads or 1)
    step = max(1, -(-n_max // threads))
    bounds = [(lo, min(lo + step, n_max + 1)) for lo in range(1, n_max + 1, step)]
    if threads == 1:
        chunks = [_sweep_chunk(lo, hi, K) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda b: _sweep_chunk(b[0], b[1], K), bounds))
    norms = [c for chunk in chunks for c in chunk]

    records, prefix = [], []
    running = DyadicRational(0)
    for n, c in enumerate(norms, start=1):
        v = variation(n)
        records.append(LebesgueRecord(
            n=n, variation=v, constant=c, constant_float=float(c),
            lower_ok=8 * c >= v, upper_ok=c <= v))
        running = running + c
        prefix.append(running)
    return records, prefix

