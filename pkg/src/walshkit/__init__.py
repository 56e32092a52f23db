"""Exact Walsh-Fourier analysis on the dyadic group.

Every object handled here is a cylinder function, so a finite dyadic grid
represents it exactly and all norms, coefficients and maximal functions are
computed in exact dyadic-rational arithmetic.
"""

__version__ = "0.1.0"

from .dyadic import (  # noqa: E402
    CapExceeded,
    DyadicRational,
    Grid1D,
    Grid2D,
    ResolutionError,
    integrate,
    l1_norm,
    lp_norm,
    refine,
    tensor,
)
from .hardy import h1_norm_1d, h1_norm_2d, maximal_function_2d  # noqa: E402
from .kernels import dirichlet_direct, dirichlet_recursive, lebesgue_constant, lebesgue_sweep  # noqa: E402
from .strong import (  # noqa: E402
    WeightFunction,
    closed_form_partial_sum,
    counterexample,
    divergence_sweep,
    fine_ratios,
    snn_norm,
)
from .walsh import analyze, analyze2d, partial_sum_1d, partial_sum_2d, synthesize, synthesize2d, walsh_function  # noqa: E402
