"""Binary-expansion helpers: digits, order, variation and its prefix sums."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BinaryDigits:
    """Little-endian binary digits of a nonnegative integer.

    ``digits[k]`` is the coefficient of ``2**k``; trailing zeros are dropped,
    so ``BinaryDigits.of(0).digits == ()``.
    """

    source: int
    digits: tuple[int, ...]

    @classmethod
    def of(cls, n: int) -> "BinaryDigits":
        if n < 0:
            raise ValueError(f"expected a nonnegative integer, got {n}")
        digits = []
        m = n
        while m:
            digits.append(m & 1)
            m >>= 1
        return cls(n, tuple(digits))

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, k: int) -> int:
        # digits beyond the stored ones are zero
        return self.digits[k] if 0 <= k < len(self.digits) else 0


def order(n: int) -> int:
    """Return ``|n|``, the position of the leading binary digit."""
    if n < 1:
        raise ValueError(f"order is undefined for n={n}")
    return n.bit_length() - 1


def variation(n: int) -> int:
    """Variation ``V(n) = n_0 + sum_{k>=1} |n_k - n_{k-1}|`` from the digits."""
    d = BinaryDigits.of(n)
    total = d[0]
    for k in range(1, len(d) + 1):
        total += abs(d[k] - d[k - 1])
    return total


def variation_by_sign_changes(n: int) -> int:
    """Count digit changes in ``0, n_0, n_1, ..., n_|n|, 0``.

    Independent route to :func:`variation` used as a test oracle.
    """
    padded = [0, *BinaryDigits.of(n).digits, 0]
    return sum(a != b for a, b in zip(padded, padded[1:]))


def variation_array(n_max: int) -> np.ndarray:
    """``V(0), ..., V(n_max)`` as an int64 array.

    A transition between digits ``k-1`` and ``k`` is a set bit of
    ``n ^ (n << 1)``, so ``V(n)`` is that word's popcount.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    n = np.arange(n_max + 1, dtype=np.int64)
    return np.bitwise_count(n ^ (n << 1)).astype(np.int64)


def variation_prefix_sums(n_max: int) -> list[int]:
    """Entry ``n - 1`` holds ``sum_{k=1}^{n} V(k)`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    sums = []
    running = 0
    for v in variation_array(n_max)[1:].tolist():
        running += v
        sums.append(running)
    return sums
