"""Quadratic partial sums of the counterexample family and weighted strong sums.

``f_{n,n} = (D_{2^{n+1}} - D_{2^n}) x (D_{2^{n+1}} - D_{2^n})`` has Walsh
coefficients equal to 1 exactly on the block ``[2^n, 2^{n+1})^2``.  Hence
``S_{k,k} f_{n,n}`` vanishes for ``k <= 2^n`` and, for ``2^n < k <= 2^{n+1}``,
equals ``(w_{2^n} D_{k-2^n}) x (w_{2^n} D_{k-2^n})`` whose L1 norm is
``||D_{k-2^n}||_1 ** 2``.  Any weighted series over ``k`` therefore reduces to
one finite block, which :func:`divergence_sweep` evaluates with exact norms.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bitops import variation_array
from .dyadic import (
    _INT64_SAFE,
    DyadicRational,
    Grid1D,
    Grid2D,
    CapExceeded,
    ResolutionError,
    l1_norm,
    multiply,
    subtract,
    tensor,
)
from .kernels import dirichlet_closed_form, dirichlet_recursive, lebesgue_constant, lebesgue_constants
from .walsh import _walsh_matrix, analyze, analyze2d, partial_sum_2d, walsh_function

__all__ = [
    "WeightFunction",
    "DivergenceRecord",
    "COUNTEREXAMPLE_CAP",
    "ORACLE_CAP",
    "log_value",
    "counterexample",
    "difference_kernel",
    "closed_form_partial_sum",
    "snn_norm",
    "snn_norm_oracle",
    "lower_bound_violations",
    "block_sum",
    "divergence_sweep",
    "quadratic_partial_sum_norms",
    "theorem_g_sum",
    "partial_sum_norms_1d",
    "simon_sum_1d",
    "fine_ratios",
    "cauchy_schwarz_sides",
    "cauchy_schwarz_check",
]

COUNTEREXAMPLE_CAP = 12
ORACLE_CAP = 6

_LOG_BASES = {"e": math.e, "natural": math.e, "2": 2.0, "two": 2.0}


def log_value(x: float, base: str = "e") -> float:
    try:
        b = _LOG_BASES[str(base)]
    except KeyError:
        raise ValueError(f"log base must be one of {sorted(_LOG_BASES)}") from None
    return math.log(x) if b == math.e else math.log2(x)


@dataclass(frozen=True)
class WeightFunction:
    """Nondecreasing weight ``Phi: {1, 2, ...} -> [1, inf)``.

    Presets are clamped into ``[1, inf)``: ``log`` is ``max(1, ln t)``,
    ``loglog`` is ``max(1, ln ln(t + 16))`` and ``power`` is ``(1 + t)**alpha``.
    """

    kind: str = "one"
    alpha: float = 0.0

    KINDS = ("one", "log", "loglog", "power")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown weight kind {self.kind!r}")
        if self.kind == "power" and not self.alpha > 0:
            raise ValueError("power weight needs alpha > 0 to be unbounded")

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "one":
            out = np.ones_like(t)
        elif self.kind == "log":
            out = np.maximum(1.0, np.log(t))
        elif self.kind == "loglog":
            out = np.maximum(1.0, np.log(np.log(t + 16.0)))
        else:
            out = (1.0 + t) ** self.alpha
        return float(out) if out.ndim == 0 else out

    @property
    def unbounded(self) -> bool:
        return self.kind != "one"

    def validate(self, t_max: int) -> None:
        """Check ``Phi >= 1`` and ``Phi(t) <= Phi(t+1)`` for ``1 <= t < t_max``."""
        vals = self(np.arange(1, t_max + 1))
        if np.any(vals < 1.0):
            raise ValueError(f"weight {self.kind} drops below 1")
        if np.any(np.diff(vals) < 0):
            raise ValueError(f"weight {self.kind} is not nondecreasing")


@dataclass(frozen=True)
class DivergenceRecord:
    n: int
    block_sum: float
    phi_at_block: float
    ratio: float
    exact_norms_used: bool
    path: str


def difference_kernel(n: int) -> Grid1D:
    """``D_{2^{n+1}} - D_{2^n}`` at resolution ``n + 1``."""
    return subtract(dirichlet_closed_form(n + 1, n + 1), dirichlet_closed_form(n, n + 1))


def counterexample(n: int, cap: int = COUNTEREXAMPLE_CAP) -> Grid2D:
    """``f_{n,n}`` as an exact grid at resolution ``n + 1``."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n > cap:
        raise CapExceeded(f"f_{{{n},{n}}} needs 4^{n + 1} cells; cap is n <= {cap}")
    d = difference_kernel(n)
    return tensor(d, d)


def _check_block(n: int, k: int) -> None:
    if n < 0 or not (1 << n) < k <= (1 << (n + 1)):
        raise ValueError(f"k={k} outside the block (2^{n}, 2^{n + 1}]")


def closed_form_partial_sum(n: int, k: int) -> Grid2D:
    """``(w_{2^n} D_{k-2^n}) x (w_{2^n} D_{k-2^n})`` at resolution ``n + 1``."""
    _check_block(n, k)
    g = multiply(walsh_function(1 << n, n + 1), dirichlet_recursive(k - (1 << n), n + 1))
    return tensor(g, g)


def snn_norm(n: int, k: int) -> DyadicRational:
    """``||S_{k,k} f_{n,n}||_1 = ||D_{k-2^n}||_1 ** 2`` (1D route)."""
    _check_block(n, k)
    return lebesgue_constant(k - (1 << n)) ** 2


def snn_norm_oracle(n: int, k: int) -> DyadicRational:
    """Same norm through the full 2D transform; small ``n`` only."""
    _check_block(n, k)
    if n > ORACLE_CAP:
        raise CapExceeded(f"2D oracle path is capped at n <= {ORACLE_CAP}")
    return l1_norm(partial_sum_2d(counterexample(n), k, k))


def _block_norms(n: int) -> tuple[np.ndarray, int]:
    """Numerators ``t_j`` with ``||D_j||_1 = t_j / 2**K`` for ``j = 1..2^n``."""
    table, K = lebesgue_constants(1 << n)
    return table[1:], K


def lower_bound_violations(n: int) -> int:
    """Count ``k`` in the block with ``||S_{k,k} f_{n,n}||_1 < V(k-2^n)^2 / 64``.

    Both sides are nonnegative, so the exact test is ``8 t_j >= V(j) 2^K``.
    """
    t, K = _block_norms(n)
    v = variation_array(1 << n)[1:]
    lhs = [8 * int(a) for a in t]
    rhs = [int(b) << K for b in v]
    return sum(a < b for a, b in zip(lhs, rhs))


def _weights(n: int, phi: WeightFunction, log_base: str) -> np.ndarray:
    k = np.arange((1 << n) + 1, (1 << (n + 1)) + 1, dtype=np.float64)
    if str(log_base) not in _LOG_BASES:
        raise ValueError(f"log base must be one of {sorted(_LOG_BASES)}")
    logs = np.log(k + 1.0) if _LOG_BASES[str(log_base)] == math.e else np.log2(k + 1.0)
    return phi(k) / (k * logs ** 2)


def block_sum(n: int, phi: WeightFunction, log_base: str = "e", oracle: bool = False) -> float:
    """``sum_{2^n < k <= 2^{n+1}} ||S_{k,k} f_{n,n}||_1 Phi(k) / (k log^2(k+1))``."""
    if oracle:
        norms = [float(snn_norm_oracle(n, k)) for k in range((1 << n) + 1, (1 << (n + 1)) + 1)]
    else:
        t, K = _block_norms(n)
        norms = [float(DyadicRational(int(a) * int(a), 2 * K)) for a in t]
    w = _weights(n, phi, log_base)
    return math.fsum(a * b for a, b in zip(norms, w.tolist()))


def divergence_sweep(n_min: int, n_max: int, phi: WeightFunction, log_base: str = "e",
                     oracle: bool = False, threads: int | None = None,
                     cap: int = 14) -> list[DivergenceRecord]:
    """One record per block ``n``; the block is the whole series for ``f_{n,n}``."""
    if not 0 <= n_min <= n_max:
        raise ValueError(f"invalid block range {n_min}..{n_max}")
    if n_max > cap:
        raise CapExceeded(f"n_max={n_max} exceeds cap {cap}")
    if oracle and n_max > ORACLE_CAP:
        raise CapExceeded(f"--oracle is limited to n <= {ORACLE_CAP}")
    phi.validate(1 << (n_max + 1))

    def one(n):
        b = block_sum(n, phi, log_base, oracle)
        p = phi(1 << n)
        return DivergenceRecord(n=n, block_sum=b, phi_at_block=p, ratio=b / p,
                                exact_norms_used=True, path="2d" if oracle else "1d")

    ns = range(n_min, n_max + 1)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, ns))
    return [one(n) for n in ns]


def quadratic_partial_sum_norms(f: Grid2D, k_max: int) -> list[DyadicRational]:
    """Exact ``||S_{k,k} f||_1`` for ``k = 1..k_max``, grown one frequency at a time."""
    N = f.resolution
    if not 1 <= k_max <= (1 << N):
        raise ResolutionError(f"k_max={k_max} outside 1..2^{N}")
    spec = analyze2d(f)
    c = spec.values
    w = _walsh_matrix(N)
    if int(np.abs(c).astype(object).sum()) >= _INT64_SAFE:
        c, w = c.astype(object), w.astype(object)
    s = np.zeros((1 << N, 1 << N), dtype=c.dtype)
    out = []
    for k in range(1, k_max + 1):
        i = k - 1
        # new row i (columns < k) and new column i (rows < i)
        s += np.multiply.outer(w[i], c[i, :k].dot(w[:k]))
        if i:
            s += np.multiply.outer(c[:i, i].dot(w[:i]), w[i])
        out.append(DyadicRational(int(np.abs(s).sum()), spec.exponent + 2 * N))
    return out


def theorem_g_sum(f: Grid2D, k_max: int, log_base: str = "e") -> float:
    """``sum_{k=1}^{k_max} ||S_{k,k} f||_1 / (k log^2(k+1))``."""
    norms = quadratic_partial_sum_norms(f, k_max)
    return math.fsum(float(a) / (k * log_value(k + 1, log_base) ** 2)
                     for k, a in enumerate(norms, start=1))


def partial_sum_norms_1d(f: Grid1D, k_max: int) -> list[DyadicRational]:
    """Exact ``||S_k f||_1`` for ``k = 1..k_max``."""
    N = f.resolution
    if not 1 <= k_max <= (1 << N):
        raise ResolutionError(f"k_max={k_max} outside 1..2^{N}")
    spec = analyze(f)
    c = spec.values
    if int(np.abs(c).astype(object).sum()) >= _INT64_SAFE:
        c = c.astype(object)
    s = np.zeros(1 << N, dtype=c.dtype)
    out = []
    for k in range(1, k_max + 1):
        s = s + c[k - 1] * walsh_function(k - 1, N).values
        out.append(DyadicRational(int(np.abs(s).sum()), spec.exponent + N))
    return out


def simon_sum_1d(f: Grid1D, n: int, log_base: str = "e") -> float:
    """``(1 / log n) sum_{k=1}^{n} ||S_k f||_1 / k``."""
    if n < 2:
        raise ValueError("n must be at least 2 (log n vanishes at 1)")
    norms = partial_sum_norms_1d(f, n)
    total = math.fsum(float(a) / k for k, a in enumerate(norms, start=1))
    return total / log_value(n, log_base)


def _checkpoints(n_max: int) -> list[int]:
    pts = [1 << e for e in range(1, n_max.bit_length()) if (1 << e) <= n_max]
    if not pts or pts[-1] != n_max:
        pts.append(n_max)
    return pts


def fine_ratios(n_max: int, variant: str = "variation", checkpoints=None,
                cap: int = 1 << 24) -> list[tuple[int, float]]:
    """``(sum_{k<=n} X(k)) / (n ln n)`` at checkpoints, ``X = V`` or ``||D_k||_1``.

    Default checkpoints are the powers of two up to ``n_max`` plus ``n_max``.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if n_max > cap:
        raise CapExceeded(f"n_max={n_max} exceeds cap {cap}")
    pts = sorted(checkpoints) if checkpoints is not None else _checkpoints(n_max)
    if pts and (pts[0] < 2 or pts[-1] > n_max):
        raise ValueError("checkpoints must lie in 2..n_max")
    if variant == "variation":
        sums = np.cumsum(variation_array(n_max)[1:])
        exact = [DyadicRational(int(sums[n - 1])) for n in pts]
    elif variant == "lebesgue":
        table, K = lebesgue_constants(n_max)
        sums = np.cumsum(table[1:])
        exact = [DyadicRational(int(sums[n - 1]), K) for n in pts]
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return [(n, float(s) / (n * math.log(n))) for n, s in zip(pts, exact)]


def cauchy_schwarz_sides(n: int) -> tuple[int, int]:
    """``((sum V(k))^2, 2^n sum V(k)^2)`` over ``k = 1..2^n``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    v = variation_array(1 << n)[1:]
    s1 = int(v.sum())
    s2 = int((v * v).sum())
    return s1 * s1, (1 << n) * s2


def cauchy_schwarz_check(n: int) -> bool:
    lhs, rhs = cauchy_schwarz_sides(n)
    return lhs <= rhs
