"""Exact invariant suites behind ``walshkit verify``.

Each check returns ``(passed, detail)``.  Details never contain timings or
anything else that varies between runs, so reports are byte-stable.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bitops, dyadic, hardy, kernels, strong, walsh
from .dyadic import DyadicRational, Grid1D, Grid2D

SEED = 20140217


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.suite}.{self.name}: {self.detail}"


def _rng(tag: int) -> np.random.Generator:
    return np.random.default_rng([SEED, tag])


def random_grid_1d(rng, resolution: int, low: int = -8, high: int = 9) -> Grid1D:
    return Grid1D(rng.integers(low, high, size=1 << resolution))


def random_grid_2d(rng, resolution: int, low: int = -8, high: int = 9) -> Grid2D:
    side = 1 << resolution
    return Grid2D(rng.integers(low, high, size=(side, side)))


# -- bitops -----------------------------------------------------------------

def check_order_bracket():
    bad = [n for n in range(1, (1 << 16) + 1)
           if not (1 << bitops.order(n)) <= n < (1 << (bitops.order(n) + 1))]
    return not bad, f"2^|n| <= n < 2^(|n|+1) for n <= 2^16, {len(bad)} failures"


def check_variation_routes():
    vec = bitops.variation_array(1 << 12)
    bad = [n for n in range((1 << 12) + 1)
           if not bitops.variation(n) == bitops.variation_by_sign_changes(n) == vec[n]]
    return not bad, f"definition = sign changes = popcount route for n <= 2^12, {len(bad)} failures"


def check_variation_range():
    v = bitops.variation_array(1 << 16)
    n = np.arange(1, (1 << 16) + 1)
    orders = np.array([bitops.order(int(k)) for k in n])
    ok = bool(np.all((v[1:] >= 2) & (v[1:] <= orders + 2)))
    return ok, "2 <= V(n) <= |n| + 2 for n <= 2^16"


# -- dyadic -----------------------------------------------------------------

def check_refine_invariance():
    rng = _rng(1)
    bad = 0
    for _ in range(50):
        g = random_grid_1d(rng, int(rng.integers(0, 7)))
        h = random_grid_2d(rng, int(rng.integers(0, 4)))
        for d in range(5):
            bad += dyadic.integrate(dyadic.refine(g, g.resolution + d)) != dyadic.integrate(g)
            if d <= 2:
                bad += dyadic.l1_norm(dyadic.refine(h, h.resolution + d)) != dyadic.l1_norm(h)
    return bad == 0, f"integral and L1 invariant under refinement, {bad} failures"


def check_triangle_and_tensor():
    rng = _rng(2)
    bad = 0
    for _ in range(50):
        N = int(rng.integers(0, 9))
        a, b = random_grid_1d(rng, N), random_grid_1d(rng, N)
        bad += not dyadic.l1_norm(dyadic.add(a, b)) <= dyadic.l1_norm(a) + dyadic.l1_norm(b)
        if N <= 6:
            t = dyadic.tensor(a, b)
            bad += dyadic.l1_norm(t) != dyadic.l1_norm(a) * dyadic.l1_norm(b)
    return bad == 0, f"triangle inequality and tensor multiplicativity, {bad} failures"


# -- transforms ---------------------------------------------------------------

def check_parseval_roundtrip():
    rng = _rng(3)
    bad = 0
    for i in range(200):
        if i % 2 == 0:
            g = random_grid_1d(rng, int(rng.integers(0, 9)))
            s = walsh.analyze(g)
            back = walsh.synthesize(s)
        else:
            g = random_grid_2d(rng, int(rng.integers(0, 6)))
            s = walsh.analyze2d(g)
            back = walsh.synthesize2d(s)
        energy = dyadic.integrate(dyadic.multiply(g, g))
        coeff_energy = sum((s[idx] ** 2 for idx in np.ndindex(s.shape)), DyadicRational(0))
        bad += back != g or energy != coeff_energy
    return bad == 0, f"Parseval and round trip on 200 random grids, {bad} failures"


def check_butterfly_vs_naive():
    rng = _rng(4)
    bad = 0
    for N in range(7):
        g = random_grid_1d(rng, N)
        bad += walsh.analyze(g) != walsh.analyze_direct(g)
        if N <= 4:
            h = random_grid_2d(rng, N)
            bad += walsh.analyze2d(h) != walsh.analyze2d_direct(h)
    return bad == 0, f"fast transform equals direct inner products for N <= 6, {bad} failures"


def check_walsh_group():
    ws = [walsh.walsh_function(n, 6) for n in range(64)]
    bad = 0
    for m in range(64):
        for n in range(64):
            prod = dyadic.multiply(ws[m], ws[n])
            bad += prod != ws[m ^ n]
            bad += dyadic.integrate(prod) != (1 if m == n else 0)
    return bad == 0, f"w_m w_n = w_(m xor n) and orthonormality for m, n < 64, {bad} failures"


def check_averages_vs_partial_sums():
    rng = _rng(5)
    bad = 0
    for _ in range(20):
        g = random_grid_2d(rng, int(rng.integers(0, 7)))
        avgs = walsh.dyadic_averages_2d(g)
        bad += sum(avgs[k] != walsh.partial_sum_2d(g, 1 << k, 1 << k) for k in range(len(avgs)))
    return bad == 0, f"block averages equal S_(2^k,2^k) for random grids, {bad} failures"


# -- kernels ------------------------------------------------------------------

def check_kernel_equivalence(n_max: int = 4096):
    K = kernels.minimal_resolution(n_max)
    bad = 0
    for n, direct in kernels.iter_dirichlet_direct(n_max, K):
        rec = kernels.dirichlet_recursive(n, kernels.minimal_resolution(n))
        bad += dyadic.refine(rec, K) != direct
    return bad == 0, f"direct sum = leading-digit recursion for 1 <= n <= {n_max}, {bad} mismatches"


def check_dir1(m_max: int = 12):
    bad = 0
    for m in range(m_max + 1):
        g = kernels.dirichlet_recursive(1 << m, m)
        expected = np.zeros(1 << m, dtype=np.int64)
        expected[0] = 1 << m
        bad += g != Grid1D(expected)
        bad += kernels.dirichlet_closed_form(m, m) != g
    return bad == 0, f"D_(2^m) = 2^m on I_m and 0 elsewhere for m <= {m_max}, {bad} failures"


def check_dir3(n_max: int = 4096):
    records, _ = kernels.lebesgue_sweep(n_max)
    bad = [r.n for r in records if not (r.lower_ok and r.upper_ok)]
    return not bad, f"V(n)/8 <= ||D_n||_1 <= V(n) for 1 <= n <= {n_max}, {len(bad)} violations"


def check_norm_table(n_max: int = 4096):
    table, K = kernels.lebesgue_constants(n_max)
    records, _ = kernels.lebesgue_sweep(n_max)
    bad = sum(DyadicRational(int(table[r.n]), K) != r.constant for r in records)
    return bad == 0, f"digit recursion table = grid L1 norms for n <= {n_max}, {bad} mismatches"


def check_kernel_spectrum(n_max: int = 256):
    bad = 0
    for n in range(1, n_max + 1):
        N = kernels.minimal_resolution(n)
        s = walsh.analyze(kernels.dirichlet_recursive(n, N))
        expected = np.zeros(1 << N, dtype=np.int64)
        expected[:n] = 1
        bad += s != walsh.Spectrum1D(expected)
    return bad == 0, f"D_n has coefficients 1 below n and 0 above for n <= {n_max}, {bad} failures"


# -- hardy --------------------------------------------------------------------

def check_block_coefficients(n_max: int = 8):
    bad = 0
    for n in range(n_max + 1):
        s = walsh.analyze2d(strong.counterexample(n))
        expected = np.zeros(s.shape, dtype=np.int64)
        expected[1 << n:, 1 << n:] = 1
        bad += s != walsh.Spectrum2D(expected)
    return bad == 0, f"f_(n,n) coefficients are the 0/1 block pattern for n <= {n_max}, {bad} failures"


def check_unit_h1(n_max: int = 8):
    bad = 0
    for n in range(n_max + 1):
        rep = hardy.h1_norm_2d(strong.counterexample(n))
        bad += not (rep.h1 == rep.l1 == 1)
    return bad == 0, f"||f_(n,n)||_H1 = ||f_(n,n)||_1 = 1 for n <= {n_max}, {bad} failures"


def check_h1_dominates_l1():
    rng = _rng(6)
    bad = 0
    for _ in range(40):
        g = random_grid_2d(rng, int(rng.integers(0, 6)))
        rep = hardy.h1_norm_2d(g)
        bad += rep.h1 < rep.l1
        c = DyadicRational(int(rng.integers(-7, 8)), int(rng.integers(0, 4)))
        bad += hardy.h1_norm_2d(dyadic.scale(g, c)).h1 != abs(c) * rep.h1
    return bad == 0, f"h1 >= l1 and h1(c f) = |c| h1(f) on random grids, {bad} failures"


# -- strong -------------------------------------------------------------------

def check_closed_form(n_max: int = 6):
    bad = 0
    for n in range(n_max + 1):
        f = strong.counterexample(n)
        spec = walsh.analyze2d(f)
        for k in range(0, (1 << (n + 1)) + 1):
            coeffs = spec.values.copy()
            coeffs[k:, :] = 0
            coeffs[:, k:] = 0
            s = walsh.synthesize2d(walsh.Spectrum2D(coeffs, spec.exponent))
            if k <= (1 << n):
                bad += not s.is_zero()
                continue
            bad += s != strong.closed_form_partial_sum(n, k)
            bad += dyadic.l1_norm(s) != strong.snn_norm(n, k)
    return bad == 0, f"S_(k,k) f_(n,n) closed form and norm ||D_(k-2^n)||_1^2 for n <= {n_max}, {bad} failures"


def check_lower_bound(n_max: int = 12):
    bad = sum(strong.lower_bound_violations(n) for n in range(n_max + 1))
    return bad == 0, f"||S_(k,k) f_(n,n)||_1 >= V(k-2^n)^2/64 for n <= {n_max}, {bad} violations"


def check_divergence():
    recs = strong.divergence_sweep(6, 13, strong.WeightFunction("log"))
    ratios = [r.ratio for r in recs]
    sums = [r.block_sum for r in recs]
    ok = min(ratios) >= 0.02 and all(a <= b for a, b in zip(sums, sums[1:]))
    return ok, f"Phi=log: min ratio {min(ratios):.6f} >= 0.02, block sums nondecreasing over n=6..13"


def check_theorem_g():
    recs = strong.divergence_sweep(4, 12, strong.WeightFunction("one"))
    sums = [r.block_sum for r in recs]
    spread = max(sums) / min(sums)
    return spread < 3, f"Phi=one: max/min block sum {spread:.6f} < 3 over n=4..12"


def check_cauchy_schwarz(n_max: int = 20):
    bad = 0
    for n in range(1, n_max + 1):
        lhs, rhs = strong.cauchy_schwarz_sides(n)
        bad += lhs > rhs or (lhs == rhs) != (n in (1, 2))
    return bad == 0, f"(sum V)^2 <= 2^n sum V^2 with equality only at n in {{1,2}}, n <= {n_max}, {bad} failures"


def check_simon():
    rng = _rng(7)
    worst = 0.0
    for _ in range(100):
        g = random_grid_1d(rng, 8)
        if g.is_zero():
            continue
        worst = max(worst, strong.simon_sum_1d(g, 256) / float(hardy.h1_norm_1d(g).h1))
    return worst <= 8.0, f"max simon_sum/h1 over 100 random grids at N=8 is {worst:.6f} <= 8"


# -- fine ---------------------------------------------------------------------

def check_fine():
    var = dict(strong.fine_ratios(1 << 20, "variation"))
    leb = dict(strong.fine_ratios(1 << 16, "lebesgue"))
    dv = abs(var[1 << 20] - var[1 << 18]) / var[1 << 20]
    dl = abs(leb[1 << 16] - leb[1 << 14]) / leb[1 << 16]
    ok = dv < 0.05 and dl < 0.08 and 0.2 < var[1 << 20] < 1.0 and 0.2 < leb[1 << 16] < 1.0
    return ok, (f"variation {var[1 << 20]:.6f} (drift {dv:.4%}), "
                f"lebesgue {leb[1 << 16]:.6f} (drift {dl:.4%})")


SUITES: dict[str, list[tuple[str, Callable]]] = {
    "bitops": [
        ("order_bracket", check_order_bracket),
        ("variation_routes", check_variation_routes),
        ("variation_range", check_variation_range),
    ],
    "dyadic": [
        ("refine_invariance", check_refine_invariance),
        ("triangle_tensor", check_triangle_and_tensor),
    ],
    "transforms": [
        ("parseval_roundtrip", check_parseval_roundtrip),
        ("butterfly_vs_naive", check_butterfly_vs_naive),
        ("walsh_group", check_walsh_group),
        ("averages_vs_partial_sums", check_averages_vs_partial_sums),
    ],
    "kernels": [
        ("construction_equivalence", check_kernel_equivalence),
        ("dir1_closed_form", check_dir1),
        ("dir3_bounds", check_dir3),
        ("norm_table", check_norm_table),
        ("kernel_spectrum", check_kernel_spectrum),
    ],
    "hardy": [
        ("block_coefficients", check_block_coefficients),
        ("unit_h1", check_unit_h1),
        ("h1_dominates_l1", check_h1_dominates_l1),
    ],
    "strong": [
        ("closed_form_identity", check_closed_form),
        ("v_squared_lower_bound", check_lower_bound),
        ("divergence_phi_log", check_divergence),
        ("theorem_g_phi_one", check_theorem_g),
        ("cauchy_schwarz", check_cauchy_schwarz),
        ("simon_p1", check_simon),
    ],
    "fine": [
        ("fine_ratios", check_fine),
    ],
}


def run_suite(suite: str = "all", threads: int = 1) -> list[CheckResult]:
    """Run the named suite (or every suite); results come back in registry order."""
    if suite == "all":
        jobs = [(s, name, fn) for s, checks in SUITES.items() for name, fn in checks]
    elif suite in SUITES:
        jobs = [(suite, name, fn) for name, fn in SUITES[suite]]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {['all', *SUITES]}")

    def one(job):
        s, name, fn = job
        passed, detail = fn()
        return CheckResult(s, name, bool(passed), detail)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, jobs))
    return [one(job) for job in jobs]
