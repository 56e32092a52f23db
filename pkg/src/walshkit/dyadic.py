"""Exact cylinder functions on the dyadic group at finite resolution.

A resolution-``N`` function on ``G`` is constant on the ``2**N`` cells
``I_N(x)``.  Cell ``j`` holds the points whose first ``N`` coordinates are the
bits of ``j`` read least-significant first (bit ``k`` of ``j`` is ``x_k``).
This makes ``I_m`` membership a divisibility test and Walsh evaluation a
parity of ``n & j``; it also means cell order is bit-reversed with respect to
the usual embedding in ``[0, 1)``, which no norm or integral can observe.

Values are stored exactly as an integer array together with a single binary
exponent: cell value = ``values[j] / 2**exponent``.  Arrays stay ``int64``
while magnitudes are safely bounded and fall back to Python integers
(``dtype=object``) otherwise, so nothing ever overflows silently.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from numbers import Integral, Rational
from typing import Union

import numpy as np

__all__ = [
    "DyadicRational",
    "DyadicArray",
    "Grid1D",
    "Grid2D",
    "ResolutionError",
    "CapExceeded",
    "integrate",
    "l1_norm",
    "lp_norm",
    "pointwise",
    "add",
    "subtract",
    "multiply",
    "absolute",
    "scale",
    "refine",
    "tensor",
    "constant",
    "zeros",
]

# int64 arithmetic is used only while every intermediate stays below this
_INT64_SAFE = 1 << 62


class ResolutionError(ValueError):
    """Operands live at incompatible resolutions or an index is out of range."""


class CapExceeded(ResolutionError):
    """A request would exceed a configured resource cap."""


def _trailing_zeros(n: int) -> int:
    return (n & -n).bit_length() - 1


@functools.total_ordering
class DyadicRational:
    """Exact number ``numerator / 2**exponent``.

    Always canonical: the numerator is odd, or it is zero and the exponent is
    zero.  Two instances are equal exactly when their fields are equal.
    """

    __slots__ = ("numerator", "exponent")

    def __init__(self, numerator: int = 0, exponent: int = 0):
        numerator = int(numerator)
        exponent = int(exponent)
        if numerator == 0:
            exponent = 0
        elif exponent < 0:
            numerator <<= -exponent
            exponent = 0
        else:
            shift = min(_trailing_zeros(abs(numerator)), exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def coerce(cls, value) -> "DyadicRational":
        if isinstance(value, DyadicRational):
            return value
        if isinstance(value, Integral):
            return cls(int(value), 0)
        if isinstance(value, Rational):
            den = int(value.denominator)
            if den & (den - 1):
                raise ValueError(f"{value} is not a dyadic rational")
            return cls(int(value.numerator), den.bit_length() - 1)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"cannot represent {value} exactly")
            return cls.coerce(Fraction(value))
        raise TypeError(f"cannot convert {type(value).__name__} to DyadicRational")

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.exponent)

    def _aligned(self, other: "DyadicRational") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return (self.numerator << (e - self.exponent),
                other.numerator << (e - other.exponent), e)

    def __add__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a + b, e)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, e = self._aligned(other)
        return DyadicRational(a - b, e)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return DyadicRational(self.numerator * other.numerator,
                              self.exponent + other.exponent)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, Integral) or k < 0:
            return NotImplemented
        return DyadicRational(self.numerator ** k, self.exponent * k)

    def __neg__(self):
        return DyadicRational(-self.numerator, self.exponent)

    def __abs__(self):
        return DyadicRational(abs(self.numerator), self.exponent)

    def __bool__(self):
        return self.numerator != 0

    def __eq__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return (self.numerator, self.exponent) == (other.numerator, other.exponent)

    def __lt__(self, other):
        try:
            other = DyadicRational.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        a, b, _ = self._aligned(other)
        return a < b

    def __hash__(self):
        return hash(self.as_fraction())

    def __float__(self):
        return float(self.as_fraction())

    def __str__(self):
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self):
        return f"DyadicRational({self.numerator}, {self.exponent})"


Number = Union[int, Fraction, DyadicRational]


# ---------------------------------------------------------------------------
# exact integer arrays


def _max_abs(values: np.ndarray) -> int:
    if values.size == 0:
        return 0
    if values.dtype == object:
        return max(abs(int(v)) for v in values.flat)
    return int(np.max(np.abs(values)))


def _exact(values, bound: int | None = None) -> np.ndarray:
    """Return an integer array, int64 when ``bound`` permits, else object."""
    arr = np.asarray(values)
    if arr.dtype.kind == "f":
        raise TypeError("grid values must be exact integers, got floats")
    if bound is None:
        bound = _max_abs(arr) if arr.dtype == object else None
    if arr.dtype == object:
        if bound < _INT64_SAFE:
            return arr.astype(np.int64)
        return arr
    if bound is not None and bound >= _INT64_SAFE:
        return arr.astype(object)
    return arr.astype(np.int64, copy=False)


def _to_object(values: np.ndarray) -> np.ndarray:
    out = np.empty(values.shape, dtype=object)
    out.flat[:] = [int(v) for v in values.flat]
    return out


def _shift_left(values: np.ndarray, k: int, bound: int) -> tuple[np.ndarray, int]:
    if k == 0:
        return values, bound
    new_bound = bound << k
    if values.dtype == object or new_bound >= _INT64_SAFE:
        obj = values if values.dtype == object else _to_object(values)
        return np.vectorize(lambda v: v << k, otypes=[object])(obj), new_bound
    return values << k, new_bound


def _common_odd_part(values: np.ndarray, exponent: int) -> int:
    """Largest ``s <= exponent`` such that ``2**s`` divides every value."""
    if exponent == 0 or values.size == 0:
        return 0
    if values.dtype == object:
        acc = functools.reduce(lambda a, b: a | abs(int(b)), values.flat, 0)
    else:
        acc = int(np.bitwise_or.reduce(np.abs(values), axis=None))
    if acc == 0:
        return exponent
    return min(_trailing_zeros(acc), exponent)


def _scalar_parts(value) -> tuple[int, int]:
    d = DyadicRational.coerce(value)
    return d.numerator, d.exponent


class DyadicArray:
    """Immutable exact array ``values / 2**exponent`` of fixed dimension.

    Subclasses fix ``ndim`` and interpret the array (cells of a grid or
    Walsh coefficients of a spectrum).  Equality is exact and ignores the
    internal dtype.
    """

    ndim: int = 1
    __slots__ = ("values", "exponent", "resolution", "_bound")

    def __init__(self, values, exponent: int = 0):
        arr = _exact(values)
        if arr.ndim != self.ndim:
            raise ResolutionError(
                f"{type(self).__name__} needs a {self.ndim}-d array, got {arr.ndim}-d")
        side = arr.shape[0]
        if side < 1 or side & (side - 1) or any(s != side for s in arr.shape):
            raise ResolutionError(f"shape {arr.shape} is not 2^N per axis")
        exponent = int(exponent)
        if exponent < 0:
            arr, _ = _shift_left(arr, -exponent, _max_abs(arr))
            exponent = 0
        shift = _common_odd_part(arr, exponent)
        if shift:
            arr = arr >> shift if arr.dtype != object else np.vectorize(
                lambda v: v >> shift, otypes=[object])(arr)
            exponent -= shift
        if not arr.any():
            exponent = 0
        arr = _exact(arr, _max_abs(arr))
        if arr is values:
            arr = arr.copy()
        arr.flags.writeable = False
        self.values = arr
        self.exponent = exponent
        self.resolution = side.bit_length() - 1
        self._bound = _max_abs(arr)

    @classmethod
    def from_fractions(cls, entries) -> "DyadicArray":
        """Build from any nested sequence of ints / Fractions / DyadicRationals."""
        arr = np.asarray(entries, dtype=object)
        parts = [_scalar_parts(v) for v in arr.flat]
        e = max((p[1] for p in parts), default=0)
        ints = np.empty(arr.shape, dtype=object)
        ints.flat[:] = [num << (e - ex) for num, ex in parts]
        return cls(ints, e)

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def __getitem__(self, index) -> DyadicRational:
        return DyadicRational(int(self.values[index]), self.exponent)

    def __eq__(self, other):
        if not isinstance(other, DyadicArray):
            return NotImplemented
        return (type(self) is type(other)
                and self.exponent == other.exponent
                and self.shape == other.shape
                and bool(np.all(self.values == other.values)))

    def __hash__(self):
        return hash((type(self).__name__, self.exponent, self.values.tobytes()
                     if self.values.dtype != object else tuple(self.values.flat)))

    def is_zero(self) -> bool:
        return not self.values.any()

    def to_fractions(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        out.flat[:] = [Fraction(int(v), 1 << self.exponent) for v in self.values.flat]
        return out

    def to_float(self) -> np.ndarray:
        if self.values.dtype == object:
            return np.array([float(Fraction(int(v), 1 << self.exponent))
                             for v in self.values.flat]).reshape(self.shape)
        return np.ldexp(self.values.astype(np.float64), -self.exponent)

    def aligned_values(self, exponent: int) -> np.ndarray:
        """Integer numerators over the denominator ``2**exponent``."""
        if exponent < self.exponent:
            raise ValueError("cannot align to a coarser denominator")
        return _shift_left(self.values, exponent - self.exponent, self._bound)[0]

    def __repr__(self):
        return (f"{type(self).__name__}(resolution={self.resolution}, "
                f"exponent={self.exponent}, values={self.values.tolist()!r})")


class Grid1D(DyadicArray):
    """Values of a resolution-N cylinder function on the ``2**N`` cells of G."""

    ndim = 1
    __slots__ = ()


class Grid2D(DyadicArray):
    """Values on the ``2**N x 2**N`` cells of G x G; entry (i, j) is cell i x cell j."""

    ndim = 2
    __slots__ = ()


Grid = Union[Grid1D, Grid2D]


def constant(value: Number, resolution: int, ndim: int = 1) -> Grid:
    num, e = _scalar_parts(value)
    cls = Grid1D if ndim == 1 else Grid2D
    shape = (1 << resolution,) * ndim
    return cls(np.full(shape, num, dtype=object if abs(num) >= _INT64_SAFE else np.int64), e)


def zeros(resolution: int, ndim: int = 1) -> Grid:
    return constant(0, resolution, ndim)


# ---------------------------------------------------------------------------
# integration and norms


def _sum_exact(values: np.ndarray, bound: int) -> int:
    if values.dtype == object or bound * values.size >= _INT64_SAFE:
        return sum(int(v) for v in values.flat)
    return int(values.sum())


def integrate(g: DyadicArray) -> DyadicRational:
    """Exact Haar integral: mean of the cell values."""
    total = _sum_exact(g.values, g._bound)
    return DyadicRational(total, g.exponent + g.ndim * g.resolution)


def l1_norm(g: DyadicArray) -> DyadicRational:
    total = _sum_exact(np.abs(g.values), g._bound)
    return DyadicRational(total, g.exponent + g.ndim * g.resolution)


def lp_norm(g: DyadicArray, p: float) -> float:
    """``(integral |g|**p) ** (1/p)`` in floating point."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    if p == 1:
        return float(l1_norm(g))
    vals = np.abs(g.to_float())
    return float(np.mean(vals ** p) ** (1.0 / p))


# ---------------------------------------------------------------------------
# cellwise algebra


def _check_same(a: DyadicArray, b: DyadicArray) -> None:
    if type(a) is not type(b):
        raise ResolutionError(f"cannot combine {type(a).__name__} with {type(b).__name__}")
    if a.resolution != b.resolution:
        raise ResolutionError(
            f"resolution mismatch: {a.resolution} vs {b.resolution}; refine first")


def _linear(a: DyadicArray, b: DyadicArray, sign: int) -> DyadicArray:
    _check_same(a, b)
    e = max(a.exponent, b.exponent)
    va, ba = _shift_left(a.values, e - a.exponent, a._bound)
    vb, bb = _shift_left(b.values, e - b.exponent, b._bound)
    if ba + bb >= _INT64_SAFE and va.dtype != object:
        va = _to_object(va)
    out = va + vb if sign > 0 else va - vb
    return type(a)(out, e)


def add(a: DyadicArray, b: DyadicArray) -> DyadicArray:
    return _linear(a, b, 1)


def subtract(a: DyadicArray, b: DyadicArray) -> DyadicArray:
    return _linear(a, b, -1)


def multiply(a: DyadicArray, b: DyadicArray) -> DyadicArray:
    _check_same(a, b)
    va, vb = a.values, b.values
    if a._bound * b._bound >= _INT64_SAFE:
        va = va if va.dtype == object else _to_object(va)
        vb = vb if vb.dtype == object else _to_object(vb)
    return type(a)(va * vb, a.exponent + b.exponent)


def absolute(a: DyadicArray) -> DyadicArray:
    return type(a)(np.abs(a.values), a.exponent)


def scale(a: DyadicArray, c: Number) -> DyadicArray:
    num, e = _scalar_parts(c)
    va = a.values
    if a._bound * abs(num) >= _INT64_SAFE and va.dtype != object:
        va = _to_object(va)
    return type(a)(va * num, a.exponent + e)


_POINTWISE = {
    "add": add,
    "subtract": subtract,
    "multiply": multiply,
    "absolute": absolute,
    "scale": scale,
}


def pointwise(op: str, *args):
    """Dispatch a cellwise operation by name (``add``, ``scale``, ...)."""
    try:
        fn = _POINTWISE[op]
    except KeyError:
        raise ValueError(f"unknown pointwise op {op!r}") from None
    return fn(*args)


def refine(g: Grid, resolution: int) -> Grid:
    """Re-express ``g`` on a finer grid.

    Under LSB-first indexing the sub-cells of cell ``j`` at resolution ``N``
    are ``j + t * 2**N`` at the finer resolution, so refinement is a tile.
    """
    if resolution < g.resolution:
        raise ResolutionError(
            f"cannot refine from resolution {g.resolution} down to {resolution}")
    reps = 1 << (resolution - g.resolution)
    if reps == 1:
        return g
    return type(g)(np.tile(g.values, (reps,) * g.ndim), g.exponent)


def tensor(a: Grid1D, b: Grid1D) -> Grid2D:
    """``(a x b)(x, y) = a(x) b(y)``."""
    if not (isinstance(a, Grid1D) and isinstance(b, Grid1D)):
        raise TypeError("tensor expects two Grid1D operands")
    if a.resolution != b.resolution:
        raise ResolutionError(
            f"resolution mismatch: {a.resolution} vs {b.resolution}")
    va, vb = a.values, b.values
    if a._bound * b._bound >= _INT64_SAFE:
        va = va if va.dtype == object else _to_object(va)
        vb = vb if vb.dtype == object else _to_object(vb)
    return Grid2D(np.multiply.outer(va, vb), a.exponent + b.exponent)
