import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ffmoduli import circle
from ffmoduli.characters import CycloSum, psi_eval
from ffmoduli.counting import count_N
from ffmoduli.errors import ParameterError
from ffmoduli.ff_core import GF, LaurentNum, MPoly, Poly
from ffmoduli.forms import (
    FormSystem,
    Hypersurface,
    MorphismCoeffs,
    bidegree_from_form,
    bidegree_from_matrix,
    build_G_j,
    tensor_from_form,
)

from conftest import load


def _all_morphisms(F, n, e):
    slots = [list(itertools.product(range(F.q), repeat=s + 1)) for s in range(e + 1)]
    for g in itertools.product(itertools.product(*slots), repeat=n):
        yield MorphismCoeffs(F, n, e, [[Poly(F, c) for c in row] for row in g])


def brute_S(f, e, alpha):
    """S(alpha) by direct summation of psi over the box."""
    F = f.field
    system = FormSystem(tensor_from_form(f), e)
    exps = []
    for g in _all_morphisms(F, f.n, e):
        phase = LaurentNum.zero(F)
        for a, Fj in zip(alpha.components, system.all_F(g)):
            phase = phase + a * LaurentNum.from_poly(Fj)
        exps.append(psi_eval(phase))
    return CycloSum.from_exponents(F.p, exps)


@pytest.mark.parametrize("seed", range(4))
def test_exponential_sum_matches_direct_summation(seed):
    f = load("xy_q3.json")
    rng = np.random.default_rng(seed)
    system = FormSystem(tensor_from_form(f), 1)
    alpha = circle.AlphaTuple.random(f.field, system.num_forms, rng)
    assert circle.eval_S(system, alpha).canonical() == brute_S(f, 1, alpha).canonical()


def test_exponential_sum_at_zero_is_box_size():
    f = load("quadric_q3.json")
    system = FormSystem(tensor_from_form(f), 1)
    assert circle.eval_S(system, circle.AlphaTuple.zero(f.field, system.num_forms)).as_int() == 3**6


def test_alpha_precision_contract():
    F = GF(3)
    from ffmoduli.ff_core import PrecisionError

    with pytest.raises(PrecisionError):
        circle.AlphaTuple([LaurentNum.random(F, -1, -1, np.random.default_rng(0)), LaurentNum.random(F, -1, -1, np.random.default_rng(1))])


@pytest.mark.parametrize("name,expected", [("quadric_q3.json", 1), ("xy_q3.json", 53)])
def test_integral_identity(name, expected):
    f = load(name)
    assert circle.exact_integral_N(f, 1) == expected == count_N(f, 1).N


def test_integral_identity_random_forms():
    rng = np.random.default_rng(21)
    for _ in range(3):
        f = Hypersurface.random(GF(3), 2, 2, rng)
        assert circle.exact_integral_N(f, 1) == count_N(f, 1).N


# -- Weyl differencing ---------------------------------------------------------------


def _random_mpoly(F, nvars, degree, rng):
    terms = {}
    for k in range(degree + 1):
        for e in itertools.product(range(k + 1), repeat=nvars):
            if sum(e) == k and rng.random() < 0.6:
                terms[e] = int(rng.integers(F.q))
    return MPoly(F, nvars, terms)


@given(st.integers(0, 10**6), st.sampled_from([GF(5), GF(7), GF(3)]), st.integers(1, 2), st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_difference_of_order_above_degree_vanishes(seed, F, nvars, degree):
    P = _random_mpoly(F, nvars, degree, np.random.default_rng(seed))
    assert circle.symbolic_difference(P, max(P.total_degree(), 0) + 1).is_zero()


@given(st.integers(0, 10**6), st.sampled_from([GF(5), GF(7)]), st.integers(1, 2), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_diagonal_identity(seed, F, nvars, degree):
    rng = np.random.default_rng(seed)
    P = _random_mpoly(F, nvars, degree, rng)
    assume(P.total_degree() >= 1)
    lhs, rhs = circle.diagonal_identity_sides(P, rng.integers(F.q, size=nvars))
    assert lhs == rhs


def test_first_difference_of_a_line():
    F = GF(5)
    val = circle.weyl_difference(lambda z: F(3) * z + F(1), [F(2)])
    # P(0) - P(z) = -3z
    assert int(val) == F.neg(F.mul(3, 2))


# -- decoupling and the T_j bound -------------------------------------------------------


@pytest.mark.parametrize("name", ["xy_q3.json", "quadric_q3.json"])
def test_decoupling_on_full_grid(name):
    rep = circle.decouple_grid_check(load(name), 1)
    assert rep["pass"] and rep["failures"] == 0
    assert rep["max_ratio"] <= 1 + 1e-9


@pytest.mark.parametrize("j", [0, 1, 2])
def test_t_sum_bound_on_grid(j):
    rep = circle.t_sum_grid_check(load("xy_q3.json"), 1, j, rng=np.random.default_rng(j))
    assert rep["pass"], rep


# -- E(alpha) and the N counts --------------------------------------------------------


def brute_E(G, params, alpha):
    F = G.field
    n = G.n
    xs = [Poly(F, c) for c in itertools.product(range(F.q), repeat=params.P1)]
    ys = [Poly(F, c) for c in itertools.product(range(F.q), repeat=params.P2)]
    exps = []
    for x in itertools.product(xs, repeat=n):
        for y in itertools.product(ys, repeat=n):
            val = G.gamma([list(x)] * G.d1, [list(y)] * G.d2)
            exps.append(psi_eval(alpha * LaurentNum.from_poly(val)))
    return CycloSum.from_exponents(F.p, exps)


@pytest.mark.parametrize("seed", range(3))
def test_E_matches_direct_summation(seed):
    F = GF(3)
    G = bidegree_from_matrix(F, [[1, 2], [0, 1]])
    params = circle.ArcParams(1, 1, 1, 2)
    alpha = LaurentNum.random(F, -1, -6, np.random.default_rng(seed))
    assert circle.eval_E(G, params, alpha).canonical() == brute_E(G, params, alpha).canonical()


def test_E_at_zero_is_box_size():
    F = GF(3)
    G = bidegree_from_matrix(F, [[1, 0], [0, 1]])
    params = circle.ArcParams(1, 1, 1, 2)
    assert circle.eval_E(G, params, LaurentNum.zero(F)).as_int() == 3 ** (2 * 3)


def test_n_count_inequality_random():
    f = load("xy_q3.json")
    rng = np.random.default_rng(5)
    G = build_G_j(tensor_from_form(f), 2, 3)
    params = circle.params_for(G, 2)
    for _ in range(5):
        alpha = LaurentNum.random(f.field, -1, -30, rng)
        assert circle.n_count_inequality_check(G, params, alpha)["pass"]


def test_n_counts_for_zero_alpha_fill_the_box():
    F = GF(3)
    G = bidegree_from_matrix(F, [[1, 0], [0, 1]])
    params = circle.ArcParams(1, 1, 1, 2, J=1)
    n2 = circle.n_counts(G, params, LaurentNum.zero(F), 0, "N2")
    # every point of the y-box counts: |y| < q^(Q2+P2) = q^1 in each of n coordinates
    assert n2 == 3 ** (2 * (params.Q2 + params.P2))


# -- rational approximation and arcs ---------------------------------------------------


@given(st.integers(0, 10**6), st.sampled_from([GF(2), GF(3), GF(5)]), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_rational_approx_is_best(seed, F, m):
    alpha = LaurentNum.random(F, -1, -(2 * m + 1), np.random.default_rng(seed))
    r = circle.rational_approx(alpha, m)
    assert r.g.is_monic() and r.g.deg <= m
    assert circle.best_denominator_exhaustive(alpha, m) == r.g


def test_rational_approx_of_a_rational():
    F = GF(3)
    # 1/(u+1) = u^-1 - u^-2 + u^-3 - ...
    alpha = LaurentNum(F, {-k: (1 if k % 2 else 2) for k in range(1, 12)}, floor=-11)
    r = circle.rational_approx(alpha, 2)
    assert r.g == Poly(F, [1, 1])


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_major_arc_membership_matches_search(seed):
    F = GF(3)
    params = circle.ArcParams(1, 1, 2, 3, J=2)
    alpha = LaurentNum.random(F, -1, -12, np.random.default_rng(seed))
    assert circle.major_arc_test(alpha, params) == circle.major_arc_exhaustive(alpha, params)


def test_dirichlet_threshold():
    assert circle.dirichlet_threshold(circle.ArcParams(1, 1, 1, 2)) == Fraction(1 + 2 + 1, 2)


def test_dichotomy_has_no_double_failures():
    f = load("xy_q3.json")
    G = build_G_j(tensor_from_form(f), 1, 1)
    rep = circle.dichotomy_grid(G, circle.params_for(G))
    assert rep["pass"] and not rep["double_failures"]


def test_arc_shell_integral_on_a_cubic():
    G = bidegree_from_form(load("cube_line_q5.json"), 0)
    rep = circle.arc_shell_integral(G, circle.ArcParams(0, 3, 2, 2), Fraction(5))
    assert rep["pass"], rep["checks"]


# -- sigma ----------------------------------------------------------------------------


def test_sigma_exact_for_linear_locus():
    F = GF(5)
    full = circle.sigma_estimate(bidegree_from_matrix(F, [[1, 2, 0], [0, 1, 1], [1, 0, 2]]))
    assert full.method == "rank" and not full.heuristic and full.sigma == 3
    low = circle.sigma_estimate(bidegree_from_matrix(F, [[1, 2, 0], [2, 4, 0], [0, 0, 0]]))
    assert low.sigma == 1


def test_sigma_point_count_for_smooth_quadric_piece():
    f = load("xy_q3.json")
    G = build_G_j(tensor_from_form(f), 1, 1)
    rep = circle.sigma_estimate(G)
    assert rep.sigma >= f.n


# -- shrinking -------------------------------------------------------------------------


def test_shrink_zero_forms_full_box():
    F = GF(3)
    z = circle.zero_forms(F, 2)
    assert circle.shrink_count(z, 2, -3) == 3**4


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_shrink_inequality(seed):
    rng = np.random.default_rng(seed)
    F = GF(3)
    N = int(rng.integers(1, 3))
    g = circle.random_symmetric_forms(F, N, -10, rng)
    A = int(rng.integers(1, 3))
    Z2 = -int(rng.integers(0, A))
    Z1 = Z2 - int(rng.integers(0, 2))
    assert circle.shrink_check(g, A, Z1, Z2)["pass"]


@pytest.mark.parametrize("A,Z1,Z2", [(-1, 0, 0), (1, 0, 1), (1, 0, -1), (Fraction(1, 2), 0, 0), (0, 0, 0)])
def test_shrink_contract(A, Z1, Z2):
    with pytest.raises(ParameterError):
        circle.shrink_check(circle.zero_forms(GF(3), 1), A, Z1, Z2)
