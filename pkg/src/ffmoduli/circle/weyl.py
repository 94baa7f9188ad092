"""Weyl differencing operator and homogeneous-component extraction."""
from __future__ import annotations

import itertools
import math

from ..ff_core import GF, Field, MPoly, row_reduce

__all__ = [
    "weyl_difference",
    "symbolic_difference",
    "homogeneous_component",
    "mpoly_compose",
    "extension_for_nodes",
    "diagonal_identity_sides",
]


def _vadd(a, b):
    if isinstance(a, (tuple, list)):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _vzero(a):
    if isinstance(a, (tuple, list)):
        return tuple(x - x for x in a)
    return a - a


def weyl_difference(P, points):
    """sum over eps in {0,1}^t of (-1)^|eps| P(eps_1 z_1 + ... + eps_t z_t).

    ``P`` is any callable; points are ring elements or tuples of them.
    """
    t = len(points)
    if t < 1:
        raise ValueError("need at least one difference direction")
    total = None
    for eps in itertools.product((0, 1), repeat=t):
        z = _vzero(points[0])
        for e, pt in zip(eps, points):
            if e:
                z = _vadd(z, pt)
        val = P(z)
        if sum(eps) % 2:
            val = -val
        total = val if total is None else total + val
    return total


def mpoly_compose(P: MPoly, values):
    """P(values) where each value is an MPoly in a common ring."""
    ring = values[0]
    acc = MPoly(ring.field, ring.nvars)
    for exps, c in P.terms.items():
        term = MPoly.const(ring.field, ring.nvars, c)
        for v, k in zip(values, exps):
            if k:
                term = term * v**k
        acc = acc + term
    return acc


def symbolic_difference(P: MPoly, t: int) -> MPoly:
    """P_t(z_1, ..., z_t) as a polynomial in t * nvars fresh variables."""
    F, N = P.field, P.nvars
    nv = t * N
    pts = [tuple(MPoly.var(F, nv, k * N + i) for i in range(N)) for k in range(t)]
    return weyl_difference(lambda z: mpoly_compose(P, list(z)), pts)


def extension_for_nodes(base: Field, count: int) -> Field:
    """The smallest GF(p^m) containing the prime field and at least ``count`` elements."""
    if not base.is_prime_field:
        raise NotImplementedError("node extension needs a prime base field")
    m = 1
    while base.p**m < count:
        m += 1
    return GF(base.p, m)


def _eval_in(E: Field, P: MPoly, point):
    acc = 0
    for exps, c in P.terms.items():
        term = c
        for v, k in zip(point, exps):
            if k:
                term = E.mul(term, E.pow(v, k))
        acc = E.add(acc, term)
    return acc


def homogeneous_component(P: MPoly, z, k: int, degree=None) -> int:
    """P^[k](z) from values of P along the line lambda * z.

    P(lambda z) = sum_k lambda^k P^[k](z); the coefficients are recovered by
    solving the Vandermonde system at degree + 1 distinct nodes, taken in an
    extension field when the base field is too small.  ``z`` has entries in the
    prime field; the result is an encoded prime-field element.
    """
    base = P.field
    D = P.total_degree() if degree is None else degree
    if D < 0:
        return 0
    if k > D:
        return 0
    E = base if base.q > D else extension_for_nodes(base, D + 1)
    nodes = list(range(D + 1))  # distinct encodings in E
    rows = []
    for lam in nodes:
        pt = [E.mul(lam, int(x)) for x in z]
        rows.append([E.pow(lam, i) for i in range(D + 1)] + [_eval_in(E, P, pt)])
    R, piv = row_reduce(E, rows)
    if len(piv) != D + 1:
        raise ArithmeticError("interpolation nodes are not distinct")
    val = R[k][-1]
    if val >= base.q:
        raise ArithmeticError("homogeneous component left the base field")
    return val


def diagonal_identity_sides(P: MPoly, z):
    """(P_t(z, ..., z), (-1)^t t! P^[t](z)) with t = deg P, as encoded field elements."""
    F = P.field
    t = P.total_degree()
    lhs = weyl_difference(lambda w: F(_eval_in(F, P, [int(x) for x in w])), [tuple(F(int(x)) for x in z)] * t)
    comp = homogeneous_component(P, z, t)
    rhs = F.mul(F.from_int((-1) ** t * math.factorial(t)), comp)
    return int(lhs), rhs
