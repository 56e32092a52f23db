"""Slow, independent reference evaluations written straight from the definitions.

Nothing here imports walshkit; points of G are lists of 0/1 coordinates and
all arithmetic is on Python ints and Fractions.
"""

from fractions import Fraction
from itertools import product


def digits(n):
    out = []
    while n:
        out.append(n % 2)
        n //= 2
    return out


def variation(n):
    d = digits(n)
    d = d + [0]
    total = d[0]
    for k in range(1, len(d)):
        total += abs(d[k] - d[k - 1])
    return total


def points(N):
    """Coordinates (x_0, ..., x_{N-1}) of every resolution-N cell, LSB-first index order."""
    return [[(j >> k) & 1 for k in range(N)] for j in range(2 ** N)]


def rademacher(k, x):
    return (-1) ** x[k]


def walsh(n, x):
    value = 1
    for k, nk in enumerate(digits(n)):
        if nk:
            value *= rademacher(k, x)
    return value


def dirichlet(n, x):
    return sum(walsh(k, x) for k in range(n))


def lebesgue(n, N):
    return Fraction(sum(abs(dirichlet(n, x)) for x in points(N)), 2 ** N)


def coefficient_2d(values, i, j, N):
    """f^(i, j) from a dict {(cell_x, cell_y): value} by direct integration."""
    pts = points(N)
    total = Fraction(0)
    for a, b in product(range(2 ** N), repeat=2):
        total += values[a][b] * walsh(i, pts[a]) * walsh(j, pts[b])
    return total / 4 ** N
