"""Exponential sums, Weyl differencing and major/minor arc checks."""
from .sums import AlphaTuple, IntegralResult, S_on_grid, eval_S, exact_integral_N, orthogonality_indicator
from .weyl import diagonal_identity_sides, homogeneous_component, symbolic_difference, weyl_difference
from .bidegree import (
    ArcParams,
    E_on_grid,
    decouple_check,
    decouple_grid_check,
    eval_E,
    n_count_inequality_check,
    t_sum_bound_check,
    t_sum_grid_check,
    n_counts,
    params_for,
)
from .arcs import (
    RationalApprox,
    arc_shell_integral,
    best_denominator_exhaustive,
    dichotomy_check,
    dichotomy_grid,
    dirichlet_threshold,
    major_arc_exhaustive,
    major_arc_test,
    rational_approx,
)
from .sigma import SigmaReport, sigma_estimate
from .shrink import random_symmetric_forms, shrink_check, shrink_count, zero_forms
