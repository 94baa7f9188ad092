import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoduli.ff_core import GF
from ffmoduli.forms import (
    Hypersurface,
    MorphismCoeffs,
    build_G_j,
    decomposition_check,
    fermat_smallchar_check,
    gamma_eval,
    smoothness_check,
    split_index,
    tensor_from_form,
)

from conftest import load


def test_config_round_trip():
    f = load("quadric_q3.json")
    assert Hypersurface.from_dict(f.to_dict()).to_dict() == f.to_dict()
    assert (f.q, f.n, f.d) == (3, 2, 2)


def test_tensor_recovers_form():
    rng = np.random.default_rng(2)
    for F, n, d in [(GF(5), 3, 2), (GF(7), 2, 3), (GF(5), 2, 4)]:
        f = Hypersurface.random(F, n, d, rng)
        assert tensor_from_form(f).to_form().to_dict() == f.to_dict()


def test_tensor_diagonal_is_the_form():
    # the polarisation restricted to the diagonal is f itself
    F = GF(7)
    f = Hypersurface.random(F, 3, 3, np.random.default_rng(4))
    c = tensor_from_form(f)
    X = np.random.default_rng(5).integers(F.q, size=(20, 3))
    values = f.eval_batch(X)
    for x, fx in zip(X, values):
        v = [F(int(t)) for t in x]
        assert int(gamma_eval(c, v, v, v)) == int(fx)


@given(st.integers(0, 10**6), st.sampled_from([(5, 2, 2, 1), (5, 3, 2, 2), (7, 2, 3, 1), (7, 2, 3, 2), (5, 2, 4, 1)]))
@settings(max_examples=25, deadline=None)
def test_decomposition_identity(seed, shape):
    p, n, d, e = shape
    rng = np.random.default_rng(seed)
    F = GF(p)
    f = Hypersurface.random(F, n, d, rng)
    g = MorphismCoeffs.random(F, n, e, rng)
    assert decomposition_check(f, g)


def test_split_index():
    assert split_index(3, 1) == (1, 1)
    assert split_index(3, 3) == (1, 3)
    assert split_index(3, 4) == (2, 1)
    for d in range(2, 6):
        for j in range(1, 4 * d):
            l, r = split_index(d, j)
            assert 1 <= r <= d and j == (l - 1) * d + r


def test_bidegree_pieces_have_total_degree_d():
    f = load("diag_cubic_q7.json")
    c = tensor_from_form(f)
    for j in range(f.d * 2 + 1):
        G = build_G_j(c, 2, j)
        assert G.d1 + G.d2 == f.d


def test_smoothness():
    assert smoothness_check(load("quadric_q3.json"))
    assert smoothness_check(load("xy_q3.json"))
    assert smoothness_check(load("diag_cubic_q7.json"))
    sing = Hypersurface.from_dict({"p": 5, "k": 1, "n": 2, "d": 2, "monomials": [{"exps": [2, 0], "c": 1}]})
    assert not smoothness_check(sing)


@pytest.mark.parametrize("e,p,d", [(1, 2, 5), (1, 3, 7), (1, 5, 11), (2, 2, 13)])
def test_small_characteristic_vanishing(e, p, d):
    rep = fermat_smallchar_check(e, p, d=d)
    assert rep.stated_shape
    assert rep.F_next_vanishes


def test_small_characteristic_control_is_nonzero():
    rep = fermat_smallchar_check(1, 5, d=3)
    assert not rep.F_next_vanishes
