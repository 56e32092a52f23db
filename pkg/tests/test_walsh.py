import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from walshkit.dyadic import DyadicRational, Grid1D, Grid2D, ResolutionError, constant, integrate, multiply, zeros
from walshkit.kernels import dirichlet_closed_form, dirichlet_direct
from walshkit.walsh import (
    Spectrum1D,
    Spectrum2D,
    analyze,
    analyze2d,
    analyze2d_direct,
    analyze_direct,
    dyadic_averages_1d,
    dyadic_averages_2d,
    fwht,
    partial_sum_1d,
    partial_sum_2d,
    rademacher,
    synthesize,
    synthesize2d,
    walsh_function,
)


def int_grids_1d(max_resolution=8):
    return st.integers(0, max_resolution).flatmap(
        lambda N: st.lists(st.integers(-30, 30), min_size=2 ** N, max_size=2 ** N)).map(Grid1D)


def int_grids_2d(max_resolution=5):
    return st.integers(0, max_resolution).flatmap(
        lambda N: st.lists(st.lists(st.integers(-30, 30), min_size=2 ** N, max_size=2 ** N),
                           min_size=2 ** N, max_size=2 ** N)).map(Grid2D)


class TestRademacherWalsh:
    def test_rademacher_examples(self):
        assert rademacher(0, 1) == Grid1D([1, -1])
        assert rademacher(1, 2) == Grid1D([1, 1, -1, -1])
        for k in range(6):
            assert integrate(rademacher(k, 6)) == 0

    def test_rademacher_needs_resolution(self):
        with pytest.raises(ResolutionError):
            rademacher(2, 2)

    def test_walsh_examples(self):
        assert walsh_function(0, 3) == constant(1, 3)
        assert walsh_function(3, 2) == Grid1D([1, -1, -1, 1])
        for m in range(5):
            assert walsh_function(2 ** m, 5) == rademacher(m, 5)

    def test_walsh_out_of_range(self):
        with pytest.raises(ResolutionError):
            walsh_function(8, 3)

    def test_walsh_matches_product_definition(self):
        pts = oracles.points(5)
        for n in range(32):
            expected = [oracles.walsh(n, x) for x in pts]
            assert walsh_function(n, 5).values.tolist() == expected

    def test_group_and_orthonormality(self):
        ws = [walsh_function(n, 6) for n in range(64)]
        for m in range(64):
            for n in range(64):
                prod = multiply(ws[m], ws[n])
                assert prod == ws[m ^ n]
                assert integrate(prod) == (1 if m == n else 0)


class TestAnalyze:
    @pytest.mark.parametrize("n", range(16))
    def test_walsh_has_indicator_spectrum(self, n):
        s = analyze(walsh_function(n, 4))
        expected = np.zeros(16, dtype=np.int64)
        expected[n] = 1
        assert s == Spectrum1D(expected)

    @pytest.mark.parametrize("N", range(0, 9))
    def test_reproducing_kernel_has_flat_spectrum(self, N):
        s = analyze(dirichlet_closed_form(N, N))
        assert s == Spectrum1D(np.ones(2 ** N, dtype=np.int64))

    def test_zero(self):
        assert analyze(zeros(3)).is_zero()

    def test_coefficients_are_true_fourier_coefficients(self):
        g = Grid1D([3, 1, 1, -1])
        s = analyze(g)
        assert s[0] == DyadicRational(1)
        assert [s[i] for i in range(4)] == [1, 1, 1, 0]

    @pytest.mark.parametrize("N", range(0, 7))
    def test_butterfly_matches_direct(self, N):
        rng = np.random.default_rng(N)
        g = Grid1D(rng.integers(-50, 50, 2 ** N))
        assert analyze(g) == analyze_direct(g)
        if N <= 4:
            h = Grid2D(rng.integers(-50, 50, (2 ** N, 2 ** N)))
            assert analyze2d(h) == analyze2d_direct(h)

    def test_2d_matches_pure_python_oracle(self):
        rng = np.random.default_rng(11)
        vals = rng.integers(-5, 6, (4, 4))
        s = analyze2d(Grid2D(vals))
        for i in range(4):
            for j in range(4):
                assert s[i, j].as_fraction() == oracles.coefficient_2d(vals.tolist(), i, j, 2)

    def test_fwht_promotes_instead_of_overflowing(self):
        x = np.full(8, 2 ** 60, dtype=np.int64)
        out = fwht(x)
        assert out[0] == 2 ** 63
        assert out.dtype == object


class TestSynthesize:
    def test_examples(self):
        one = np.zeros(8, dtype=np.int64)
        one[0] = 1
        assert synthesize(Spectrum1D(one)) == constant(1, 3)
        assert synthesize(Spectrum1D(np.ones(8, dtype=np.int64))) == dirichlet_closed_form(3, 3)

    @given(int_grids_1d())
    def test_roundtrip_and_parseval_1d(self, g):
        s = analyze(g)
        assert synthesize(s) == g
        energy = sum((s[i] ** 2 for i in range(s.size)), DyadicRational(0))
        assert energy == integrate(multiply(g, g))

    @settings(max_examples=50)
    @given(int_grids_2d())
    def test_roundtrip_and_parseval_2d(self, g):
        s = analyze2d(g)
        assert synthesize2d(s) == g
        energy = sum((s[idx] ** 2 for idx in np.ndindex(s.shape)), DyadicRational(0))
        assert energy == integrate(multiply(g, g))

    def test_input_unchanged(self):
        g = Grid1D([1, 2, 3, 4])
        before = g.values.copy()
        analyze(g)
        assert np.array_equal(g.values, before)
        assert not g.values.flags.writeable


class TestPartialSums:
    def test_first_partial_sum_is_mean(self):
        g = Grid1D([3, 1, 1, -1])
        assert partial_sum_1d(g, 1) == constant(integrate(g), 2)

    def test_full_partial_sum_is_identity(self):
        g = Grid1D([5, -2, 7, 0, 1, 1, 3, 9])
        assert partial_sum_1d(g, 8) == g

    @pytest.mark.parametrize("n", range(0, 17))
    def test_truncated_kernel_is_dirichlet(self, n):
        assert partial_sum_1d(dirichlet_closed_form(4, 4), n) == dirichlet_direct(n, 4)

    def test_index_bounds(self):
        with pytest.raises(ResolutionError):
            partial_sum_1d(constant(1, 2), 5)
        with pytest.raises(ResolutionError):
            partial_sum_2d(constant(1, 2, ndim=2), 1, 5)

    def test_rectangular_truncation(self):
        rng = np.random.default_rng(3)
        g = Grid2D(rng.integers(-5, 5, (8, 8)))
        s = analyze2d(g)
        p = analyze2d(partial_sum_2d(g, 3, 6))
        for i in range(8):
            for j in range(8):
                assert p[i, j] == (s[i, j] if i < 3 and j < 6 else 0)


class TestDyadicAverages:
    def test_endpoints(self):
        rng = np.random.default_rng(5)
        g = Grid2D(rng.integers(-9, 9, (8, 8)))
        avgs = dyadic_averages_2d(g)
        assert avgs[3] == g
        assert avgs[0] == constant(analyze2d(g)[0, 0], 3, ndim=2)

    @settings(max_examples=40)
    @given(int_grids_2d(6))
    def test_averages_equal_dyadic_partial_sums_2d(self, g):
        for k, avg in enumerate(dyadic_averages_2d(g)):
            assert avg == partial_sum_2d(g, 2 ** k, 2 ** k)

    @given(int_grids_1d(8))
    def test_averages_equal_dyadic_partial_sums_1d(self, g):
        for k, avg in enumerate(dyadic_averages_1d(g)):
            assert avg == partial_sum_1d(g, 2 ** k)
