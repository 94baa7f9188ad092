"""The additive character psi on K_oo and exact exponential-sum values.

psi(alpha) = e_q(a_{-1}) with e_q(a) = exp(2 pi i tr(a) / p), so every value is a
p-th root of unity and is represented by its exponent in Z/p.  A sum of such
values is a :class:`CycloSum`: p integer multiplicities, one per root.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import ContractViolation
from .ff_core import NEG_INF, Field, FqElem, LaurentNum, PrecisionError

__all__ = [
    "MAX_P",
    "CycloSum",
    "trace_map",
    "psi_eval",
    "psi_exponents",
    "orthogonality_check",
    "OrthogonalityResult",
]

MAX_P = 101


def trace_map(x: FqElem) -> FqElem:
    """tr(x) = x + x^p + ... + x^(p^(k-1)), returned in the prime subfield."""
    F = x.field
    s, y = 0, x.value
    for _ in range(F.k):
        s = F.add(s, y)
        y = F.pow(y, F.p)
    return FqElem(F, s)


def psi_eval(alpha: LaurentNum) -> int:
    """Exponent of zeta_p for psi(alpha): tr of the u^-1 digit."""
    if not alpha.is_exact and alpha.floor > -1:
        raise PrecisionError("insufficient precision: psi needs the u^-1 digit")
    return alpha.field.trace(alpha.coefficient(-1))


def psi_exponents(F: Field, values, alpha_digits):
    """Vectorised psi(alpha * v) for polynomials v.

    ``values`` has shape (..., L) holding the coefficients v_0..v_{L-1};
    ``alpha_digits`` has shape (..., L) holding alpha's digits at u^-1, ..., u^-L
    (broadcastable).  Returns tr(sum_m v_m a_{-1-m}).
    """
    prod = F.vmul(values, alpha_digits)
    return F.vtrace(F.vsum(prod, axis=-1))


class CycloSum:
    """An element sum_i mult[i] zeta_p^i of Z[zeta_p].

    Two sums are equal iff their multiplicity vectors differ by a constant, since
    1 + zeta + ... + zeta^(p-1) = 0.
    """

    __slots__ = ("p", "mult")

    def __init__(self, p: int, mult=None):
        if p > MAX_P:
            raise ValueError(f"p = {p} exceeds the dense cyclotomic limit {MAX_P}")
        self.p = p
        if mult is None:
            mult = [0] * p
        mult = [int(m) for m in mult]
        if len(mult) != p:
            raise ValueError("need exactly p multiplicities")
        self.mult = mult

    @classmethod
    def from_exponents(cls, p: int, exps) -> "CycloSum":
        exps = np.asarray(exps, dtype=np.int64).ravel()
        return cls(p, np.bincount(exps % p, minlength=p).tolist())

    @classmethod
    def integer(cls, p: int, m: int) -> "CycloSum":
        mult = [0] * p
        mult[0] = int(m)
        return cls(p, mult)

    def canonical(self) -> tuple:
        lo = min(self.mult)
        return tuple(m - lo for m in self.mult)

    def __add__(self, other):
        if not isinstance(other, CycloSum) or other.p != self.p:
            return NotImplemented
        return CycloSum(self.p, [a + b for a, b in zip(self.mult, other.mult)])

    def __sub__(self, other):
        if not isinstance(other, CycloSum) or other.p != self.p:
            return NotImplemented
        return CycloSum(self.p, [a - b for a, b in zip(self.mult, other.mult)])

    def scale(self, m: int) -> "CycloSum":
        return CycloSum(self.p, [m * a for a in self.mult])

    def add_root(self, exponent: int, count: int = 1) -> "CycloSum":
        mult = list(self.mult)
        mult[exponent % self.p] += count
        return CycloSum(self.p, mult)

    def times_root(self, exponent: int) -> "CycloSum":
        """Multiply by zeta^exponent (a cyclic shift)."""
        s = exponent % self.p
        return CycloSum(self.p, self.mult[-s:] + self.mult[:-s] if s else self.mult)

    def __eq__(self, other):
        if isinstance(other, int):
            other = CycloSum.integer(self.p, other)
        if not isinstance(other, CycloSum) or other.p != self.p:
            return NotImplemented
        return (self - other).canonical() == (0,) * self.p

    def __hash__(self):
        return hash((self.p, self.canonical()))

    def is_zero(self) -> bool:
        return len(set(self.mult)) == 1

    def is_rational_integer(self):
        """(True, m) when the sum equals m * zeta^0, else (False, None)."""
        rest = set(self.mult[1:])
        if len(rest) <= 1:
            c = self.mult[1] if self.p > 1 else 0
            return True, self.mult[0] - c
        return False, None

    def as_int(self) -> int:
        ok, m = self.is_rational_integer()
        if not ok:
            raise ValueError("not a rational integer")
        return m

    def magnitude(self) -> float:
        """|value| under zeta -> exp(2 pi i / p), in double precision.

        Rational integers are returned exactly; otherwise the relative error is
        below p * 2^-52 * sum|mult| / |value| (summation of p rounded terms).
        """
        ok, m = self.is_rational_integer()
        if ok:
            return float(abs(m))
        canon = self.canonical()
        z = sum(c * cmath.exp(2j * math.pi * i / self.p) for i, c in enumerate(canon))
        return abs(z)

    def __repr__(self):
        ok, m = self.is_rational_integer()
        if ok:
            return f"CycloSum({m})"
        return f"CycloSum(p={self.p}, {list(self.canonical())})"


class OrthogonalityResult(NamedTuple):
    lattice_sum: CycloSum
    lattice_expected: int
    integral_grid_sum: CycloSum
    integral_weight: Fraction
    integral_value: Fraction
    integral_expected: Fraction


def orthogonality_check(gamma: LaurentNum, N: int, M: int) -> OrthogonalityResult:
    """Exact check of the two orthogonality laws for psi.

    The lattice sum runs over all b in F_q[u] with |b| < q^N.  The integral of
    psi(alpha gamma) over |alpha| < q^M is realised as q^L times the sum over the
    digit grid of alpha at exponents L..M-1, where L = -1 - ord(gamma); digits
    below L do not reach the u^-1 coefficient, so the grid average is exact.
    The closed forms use ||gamma|| (equal to |gamma| on T).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    F = gamma.field
    p = F.p
    # lattice sum
    if N > 0:
        digs = np.array(gamma.coefficient_vector(-N, -1)[::-1])  # gamma_{-1}, ..., gamma_{-N}
        idx = np.arange(F.q**N, dtype=np.int64)
        b = np.empty((idx.size, N), dtype=np.int64)
        for k in range(N):
            b[:, k] = idx % F.q
            idx //= F.q
        lattice = CycloSum.from_exponents(p, psi_exponents(F, b, digs[None, :]))
    else:
        lattice = CycloSum.integer(p, 1)
    nexp = gamma.norm_exponent() if N > 0 else None
    small = N == 0 or nexp is None or nexp < -N
    lat_expected = F.q**N if small else 0
    if lattice != lat_expected:
        raise ContractViolation(f"lattice orthogonality failed: {lattice} != {lat_expected}")

    # integral over |alpha| < q^M
    top = gamma.ord
    L = M if top is NEG_INF else -1 - top
    if L >= M:
        grid = CycloSum.integer(p, 1)
        weight = Fraction(F.q) ** M
    else:
        if not gamma.is_exact and gamma.floor > -M:
            raise PrecisionError("insufficient precision on gamma for the integral")
        width = M - L
        # psi(alpha gamma) with alpha = sum_{i=L}^{M-1} a_i u^i: u^-1 digit is sum_i a_i gamma_{-1-i}
        gdig = np.array([gamma.coefficient(-1 - i) for i in range(L, M)])
        idx = np.arange(F.q**width, dtype=np.int64)
        a = np.empty((idx.size, width), dtype=np.int64)
        for k in range(width):
            a[:, k] = idx % F.q
            idx //= F.q
        grid = CycloSum.from_exponents(p, psi_exponents(F, a, gdig[None, :]))
        weight = Fraction(F.q) ** L
    ok, s = grid.is_rational_integer()
    if not ok:
        raise ContractViolation("integral grid sum is not a rational integer")
    value = weight * s
    expected = Fraction(F.q) ** M if (top is NEG_INF or top < -M) else Fraction(0)
    if value != expected:
        raise ContractViolation(f"integral orthogonality failed: {value} != {expected}")
    return OrthogonalityResult(lattice, lat_expected, grid, weight, value, expected)

