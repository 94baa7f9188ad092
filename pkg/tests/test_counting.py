import itertools
from fractions import Fraction

import numpy as np
import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoduli.counting import count_N, expected_dims, ratio_report
from ffmoduli.errors import BudgetExceeded
from ffmoduli.ff_core import GF, Poly
from ffmoduli.forms import Hypersurface, MorphismCoeffs, decomposition_sides

from conftest import load


def brute_force_N(f, e):
    """Substitute every box element into f and count identical vanishing."""
    F = f.field
    slots = [list(itertools.product(range(F.q), repeat=s + 1)) for s in range(e + 1)]
    per_coord = list(itertools.product(*slots))
    total = 0
    for g in itertools.product(per_coord, repeat=f.n):
        coeffs = MorphismCoeffs(F, f.n, e, [[Poly(F, c) for c in row] for row in g])
        lhs, _ = decomposition_sides(f, coeffs)
        total += all(x.is_zero() for x in lhs)
    return total


# Oracle values, computed once with brute_force_N and frozen here.
FROZEN_N = {"quadric_q3.json": 1, "xy_q3.json": 53}


@pytest.mark.parametrize("name", sorted(FROZEN_N))
def test_oracle_matches_frozen(name):
    assert brute_force_N(load(name), 1) == FROZEN_N[name]


@pytest.mark.parametrize("strategy", ["naive", "root-first", "linear-solve"])
@pytest.mark.parametrize("name", sorted(FROZEN_N))
def test_strategies_agree(name, strategy):
    assert count_N(load(name), 1, strategy).N == FROZEN_N[name]


def test_strategies_agree_on_random_forms():
    rng = np.random.default_rng(8)
    for p, n, d in [(3, 2, 2), (5, 2, 2), (5, 2, 3), (3, 3, 2)]:
        f = Hypersurface.random(GF(p), n, d, rng)
        strategies = ("naive", "root-first", "linear-solve") if d == 2 else ("naive", "root-first")
        counts = {s: count_N(f, 1, s).N for s in strategies}
        assert len(set(counts.values())) == 1, counts


def test_split_quadric_counts():
    assert count_N(load("split4/split4_q3.json"), 1, "linear-solve").N == 5409


def test_threads_do_not_change_the_count():
    f = load("split4/split4_q3.json")
    assert count_N(f, 1, "root-first", threads=2).N == 5409


def test_ratio_and_dimension():
    dims = expected_dims(4, 2, 1)
    assert dims.muhat == 4 * 3 - 6 == 6
    r = count_N(load("split4/split4_q3.json"), 1, "linear-solve")
    assert r.ratio == Fraction(5409, 3**6)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceeded):
        count_N(load("split4/split4_q3.json"), 1, "naive", budget=100)


def test_linear_solve_needs_quadrics():
    with pytest.raises(ValueError):
        count_N(load("diag_cubic_q7.json"), 1, "linear-solve")


def test_unknown_strategy():
    with pytest.raises(ValueError):
        count_N(load("xy_q3.json"), 1, "magic")


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_permutation_and_scaling_invariance(seed):
    rng = np.random.default_rng(seed)
    f = Hypersurface.random(GF(3), 3, 2, rng)
    N = count_N(f, 1).N
    assert count_N(f.permuted(list(rng.permutation(3))), 1).N == N
    assert count_N(f.scaled(2), 1).N == N


@pytest.mark.parametrize("p,d", [(3, 2), (5, 2), (5, 3), (7, 4)])
def test_pure_power_has_only_the_zero_map(p, d):
    f = Hypersurface.from_dict({"p": p, "k": 1, "n": 1, "d": d, "monomials": [{"exps": [d], "c": 1}]})
    assert count_N(f, 1).N == 1


def test_ratio_report_rows():
    rows = ratio_report([load("xy_q3.json")], 1)
    assert len(rows) == 1 and rows[0]["N"] == 53


def test_empty_hypersurface_is_rejected():
    with pytest.raises(ValueError):
        Hypersurface.from_dict({"p": 3, "k": 1, "n": 2, "d": 2, "monomials": []})
