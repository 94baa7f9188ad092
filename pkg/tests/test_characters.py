from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ffmoduli.characters import CycloSum, orthogonality_check, psi_eval
from ffmoduli.ff_core import GF, LaurentNum, Poly


def test_psi_reads_the_u_inverse_coefficient():
    F = GF(5)
    a = LaurentNum.from_digits(F, 1, [4, 4, 3])  # 4u + 4 + 3u^-1
    assert psi_eval(a) == 3
    # polynomials are in the kernel
    assert psi_eval(LaurentNum.from_poly(Poly(F, [1, 2, 3]))) == 0


def test_psi_uses_absolute_trace():
    F = GF(3, 2)
    for c in range(F.q):
        a = LaurentNum.u_power(F, -1, c)
        assert psi_eval(a) == F.trace(c)


@given(st.sampled_from([GF(2), GF(3), GF(5), GF(2, 2)]), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_psi_is_additive(F, seed):
    rng = np.random.default_rng(seed)
    a = LaurentNum.random(F, 2, -4, rng)
    b = LaurentNum.random(F, 2, -4, rng)
    assert psi_eval(a + b) == (psi_eval(a) + psi_eval(b)) % F.p


def test_cyclo_sum_canonical_forms():
    p = 5
    full = CycloSum.from_exponents(p, np.arange(p))
    assert full.is_zero()
    assert CycloSum.integer(p, 7).as_int() == 7
    assert CycloSum.from_exponents(p, [0, 0, 1, 2, 3, 4]).as_int() == 1
    s = CycloSum.from_exponents(p, [1])
    assert s.is_rational_integer() == (False, None)
    assert CycloSum.integer(p, 3).is_rational_integer() == (True, 3)
    assert abs(s.magnitude() - 1.0) < 1e-12


@pytest.mark.parametrize("F", [GF(2), GF(3), GF(5), GF(3, 2)])
def test_orthogonality_small_and_large(F):
    rng = np.random.default_rng(1)
    for _ in range(10):
        N = int(rng.integers(0, 3))
        M = int(rng.integers(-2, 3))
        gamma = LaurentNum.random(F, 2, -6, rng)
        r = orthogonality_check(gamma, N, M)
        assert r.lattice_sum.as_int() == r.lattice_expected
        assert r.integral_value == r.integral_expected


def test_orthogonality_on_known_instances():
    F = GF(3)
    g = LaurentNum.u_power(F, -3)  # ||g|| = q^-3 < q^-N for N = 2
    r = orthogonality_check(g, 2, 0)
    assert r.lattice_expected == 9 and r.lattice_sum.as_int() == 9
    g = LaurentNum.u_power(F, -1)
    r = orthogonality_check(g, 2, 0)
    assert r.lattice_expected == 0 and r.lattice_sum.is_zero()
    assert isinstance(r.integral_value, Fraction)
