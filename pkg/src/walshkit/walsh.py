"""Walsh-Paley system, fast Walsh-Hadamard analysis/synthesis and partial sums.

Spectra are true Fourier coefficients, ``f^(i) = integral f w_i``: analysis
carries the ``2**-N`` factor and synthesis is the bare Hadamard sum.  All
transforms run the integer butterfly on the numerators, so they are exact.
"""

from __future__ import annotations

import numpy as np

from .dyadic import (
    _INT64_SAFE,
    DyadicArray,
    Grid1D,
    Grid2D,
    ResolutionError,
    _to_object,
)

__all__ = [
    "Spectrum1D",
    "Spectrum2D",
    "parity_table",
    "rademacher",
    "walsh_function",
    "fwht",
    "analyze",
    "analyze2d",
    "analyze_direct",
    "analyze2d_direct",
    "synthesize",
    "synthesize2d",
    "partial_sum_1d",
    "partial_sum_2d",
    "dyadic_averages_1d",
    "dyadic_averages_2d",
]


class Spectrum1D(DyadicArray):
    """Walsh-Fourier coefficients ``f^(0), ..., f^(2**N - 1)``."""

    ndim = 1
    __slots__ = ()


class Spectrum2D(DyadicArray):
    """Coefficients ``f^(i, j)`` on the ``2**N x 2**N`` index square."""

    ndim = 2
    __slots__ = ()


def parity_table(resolution: int) -> np.ndarray:
    """``parity[j] = popcount(j) mod 2`` for ``0 <= j < 2**resolution``."""
    j = np.arange(1 << resolution, dtype=np.int64)
    return (np.bitwise_count(j) & 1).astype(np.int8)


def _signs(n: int, resolution: int) -> np.ndarray:
    j = np.arange(1 << resolution, dtype=np.int64)
    return 1 - 2 * (np.bitwise_count(j & n) & 1).astype(np.int64)


def rademacher(k: int, resolution: int) -> Grid1D:
    """``r_k(x) = (-1)**x_k`` sampled on the resolution grid."""
    if not 0 <= k < resolution:
        raise ResolutionError(
            f"r_{k} is not measurable at resolution {resolution}")
    return Grid1D(_signs(1 << k, resolution))


def walsh_function(n: int, resolution: int) -> Grid1D:
    """``w_n``: cell ``j`` carries ``(-1)**popcount(n & j)``."""
    if not 0 <= n < (1 << resolution):
        raise ResolutionError(
            f"w_{n} is not measurable at resolution {resolution}")
    return Grid1D(_signs(n, resolution))


def fwht(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unnormalized natural-order Hadamard transform of integers along ``axis``.

    ``out[i] = sum_j (-1)**popcount(i & j) * values[j]``.  Returns a new
    array; promotes to Python integers if the result could leave int64.
    """
    x = np.moveaxis(np.asarray(values), axis, -1)
    n = x.shape[-1]
    if n & (n - 1):
        raise ResolutionError(f"transform length {n} is not a power of two")
    if x.dtype != object:
        bound = int(np.max(np.abs(x))) if x.size else 0
        if bound * n >= _INT64_SAFE:
            x = _to_object(x)
        else:
            x = x.astype(np.int64)
    lead = x.shape[:-1]
    h = 1
    while h < n:
        y = x.reshape(*lead, n // (2 * h), 2, h)
        a = y[..., 0, :]
        b = y[..., 1, :]
        x = np.stack((a + b, a - b), axis=-2).reshape(*lead, n)
        h *= 2
    return np.moveaxis(x, -1, axis)


def analyze(g: Grid1D) -> Spectrum1D:
    return Spectrum1D(fwht(g.values), g.exponent + g.resolution)


def analyze2d(g: Grid2D) -> Spectrum2D:
    rows = fwht(g.values, axis=1)
    return Spectrum2D(fwht(rows, axis=0), g.exponent + 2 * g.resolution)


def synthesize(s: Spectrum1D) -> Grid1D:
    return Grid1D(fwht(s.values), s.exponent)


def synthesize2d(s: Spectrum2D) -> Grid2D:
    rows = fwht(s.values, axis=1)
    return Grid2D(fwht(rows, axis=0), s.exponent)


def _walsh_matrix(resolution: int) -> np.ndarray:
    i = np.arange(1 << resolution, dtype=np.int64)
    return 1 - 2 * (np.bitwise_count(i[:, None] & i[None, :]) & 1).astype(np.int64)


def analyze_direct(g: Grid1D) -> Spectrum1D:
    """Inner products against every ``w_i`` one at a time; O(4**N) oracle."""
    vals = g.values.astype(object)
    coeffs = [sum((vals * walsh_function(i, g.resolution).values).tolist())
              for i in range(g.size)]
    return Spectrum1D(np.array(coeffs, dtype=object), g.exponent + g.resolution)


def analyze2d_direct(g: Grid2D) -> Spectrum2D:
    """Direct double inner products ``sum f(x,y) w_i(x) w_j(y)``."""
    w = _walsh_matrix(g.resolution).astype(object)
    vals = g.values.astype(object)
    coeffs = w.dot(vals).dot(w.T)
    return Spectrum2D(coeffs, g.exponent + 2 * g.resolution)


def _check_index(k: int, resolution: int) -> None:
    if not 0 <= k <= (1 << resolution):
        raise ResolutionError(
            f"partial-sum index {k} exceeds 2**{resolution}")


def partial_sum_1d(f: Grid1D, k: int) -> Grid1D:
    """``S_k f = sum_{i<k} f^(i) w_i``."""
    _check_index(k, f.resolution)
    s = analyze(f)
    coeffs = s.values.copy()
    coeffs[k:] = 0
    return synthesize(Spectrum1D(coeffs, s.exponent))


def partial_sum_2d(f: Grid2D, m: int, n: int) -> Grid2D:
    """Rectangular partial sum ``S_{m,n} f`` (frequencies ``i < m, j < n``)."""
    _check_index(m, f.resolution)
    _check_index(n, f.resolution)
    s = analyze2d(f)
    coeffs = s.values.copy()
    coeffs[m:, :] = 0
    coeffs[:, n:] = 0
    return synthesize2d(Spectrum2D(coeffs, s.exponent))


def _summable(f: DyadicArray) -> np.ndarray:
    if f.values.dtype != object and f._bound * f.size >= _INT64_SAFE:
        return _to_object(f.values)
    return f.values


def dyadic_averages_1d(f: Grid1D) -> list[Grid1D]:
    """Entry ``k`` is the mean of ``f`` over each ``I_k(x)``, i.e. ``S_{2^k} f``.

    Cells sharing their low ``k`` index bits form one interval of rank ``k``.
    """
    N = f.resolution
    vals = _summable(f)
    out = []
    for k in range(N + 1):
        blocks = vals.reshape(1 << (N - k), 1 << k).sum(axis=0)
        out.append(Grid1D(np.tile(blocks, 1 << (N - k)), f.exponent + N - k))
    return out


def dyadic_averages_2d(f: Grid2D) -> list[Grid2D]:
    """Entry ``k`` averages ``f`` over the squares ``I_k(x) x I_k(y)``.

    Equals ``partial_sum_2d(f, 2**k, 2**k)``; computed by block sums only.
    """
    N = f.resolution
    vals = _summable(f)
    out = []
    for k in range(N + 1):
        r = 1 << (N - k)
        blocks = vals.reshape(r, 1 << k, r, 1 << k).sum(axis=(0, 2))
        out.append(Grid2D(np.tile(blocks, (r, r)), f.exponent + 2 * (N - k)))
    return out
