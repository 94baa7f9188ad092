import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoduli.ff_core import GF, LaurentNum, MPoly, Poly, PrecisionError, find_irreducible, is_irreducible, nullspace, poly_gcd, poly_xgcd, rank
from ffmoduli.ff_core.box import BoxSpec, index_to_digits

FIELDS = [GF(2), GF(3), GF(5), GF(7), GF(2, 3), GF(3, 2), GF(5, 2)]
field_st = st.sampled_from(FIELDS)


@st.composite
def field_and_elems(draw, k=3):
    F = draw(field_st)
    return F, [draw(st.integers(0, F.q - 1)) for _ in range(k)]


@given(field_and_elems())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
    assert F.pow(a, F.q) == a  # Frobenius fixes F_q


@given(field_and_elems(k=2))
def test_trace_is_additive_and_lands_in_prime_field(data):
    F, (a, b) = data
    ta, tb = F.trace(a), F.trace(b)
    assert 0 <= ta < F.p
    assert F.trace(F.add(a, b)) == (ta + tb) % F.p


def test_vectorised_ops_agree_with_scalar():
    rng = np.random.default_rng(0)
    for F in FIELDS:
        a = rng.integers(F.q, size=200)
        b = rng.integers(F.q, size=200)
        assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vtrace(a)) == [F.trace(int(x)) for x in a]


def test_field_rejects_composite_characteristic():
    with pytest.raises(ValueError):
        GF(6)


def test_irreducible_modulus():
    for p, k in [(2, 3), (3, 2), (5, 2), (2, 4)]:
        assert is_irreducible(find_irreducible(p, k), p)
    assert not is_irreducible((1, 0, 1), 2)  # x^2 + 1 = (x + 1)^2 over F_2


@st.composite
def polys(draw, F=None, maxdeg=5):
    F = F or draw(field_st)
    cs = draw(st.lists(st.integers(0, F.q - 1), max_size=maxdeg + 1))
    return Poly(F, cs)


@given(st.data())
def test_poly_division(data):
    F = data.draw(field_st)
    a = data.draw(polys(F))
    b = data.draw(polys(F))
    if b.is_zero():
        return
    qt, r = a.divrem(b)
    assert qt * b + r == a
    assert r.is_zero() or r.deg < b.deg


@given(st.data())
def test_xgcd_bezout(data):
    F = data.draw(field_st)
    a, b = data.draw(polys(F)), data.draw(polys(F))
    g, s, t = poly_xgcd(a, b)
    assert s * a + t * b == g
    assert g == poly_gcd(a, b)


def test_poly_absolute_value_exponent():
    F = GF(3)
    assert Poly(F, [1, 0, 2]).abs_exponent() == 2
    assert Poly.zero(F).is_zero()


def test_laurent_product_and_precision():
    F = GF(5)
    a = LaurentNum.from_digits(F, -1, [1, 2, 3], floor=-3)  # u^-1 + 2u^-2 + 3u^-3 + O(u^-4)... floor -3
    b = LaurentNum.u_power(F, 2)
    c = a * b
    assert c.coefficient(1) == 1 and c.coefficient(0) == 2 and c.coefficient(-1) == 3
    with pytest.raises(PrecisionError):
        c.coefficient(-5)


@given(st.data())
def test_laurent_ring_laws(data):
    F = data.draw(field_st)
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    a = LaurentNum.random(F, 2, -6, rng)
    b = LaurentNum.random(F, 1, -6, rng)
    assert (a + b).equals_to_precision(b + a)
    assert (a * b).equals_to_precision(b * a)
    assert (a - a).equals_to_precision(LaurentNum.zero(F, a.floor))


def test_integer_and_fractional_parts():
    F = GF(3)
    a = LaurentNum.from_digits(F, 1, [2, 1, 1])  # 2u + 1 + u^-1
    assert a.integer_part() == Poly(F, [1, 2])
    assert a.fractional_part().norm_exponent() == -1
    # ||a|| is the distance to F_q[u], here q^-1
    assert a.norm_below(0) and not a.norm_below(-1)


def test_linear_algebra_rank_nullity():
    F = GF(7)
    rng = np.random.default_rng(3)
    for _ in range(30):
        r, c = rng.integers(1, 5, size=2)
        M = rng.integers(F.q, size=(r, c)).tolist()
        ns = nullspace(F, M, c)
        assert rank(F, M) + len(ns) == c
        for v in ns:
            for row in M:
                acc = 0
                for x, y in zip(row, v):
                    acc = F.add(acc, F.mul(x, y))
                assert acc == 0


def test_mpoly_derivative_and_evaluate():
    F = GF(5)
    x, y = MPoly.var(F, 2, 0), MPoly.var(F, 2, 1)
    P = x * x * y + y * 3
    assert P.diff(0) == x * y * 2
    assert int(P.evaluate([F(2), F(1)])) == F.add(4, 3)


def test_box_digits_enumerate_everything():
    q, n = 3, 2
    spec = BoxSpec(n, (1, 2))
    assert spec.cardinality(q) == q ** (n * 3)
    D = index_to_digits(q, 3, 0, 27)
    assert len({tuple(r) for r in D.tolist()}) == 27
    assert D[1].tolist() == [0, 0, 1]  # least significant digit last
    assert set(itertools.chain.from_iterable(D.tolist())) == {0, 1, 2}
