"""Truncated Laurent series in 1/u: elements of K_oo = F_q((1/u)).

A :class:`LaurentNum` stores its nonzero digits sparsely together with a
precision ``floor``: every coefficient at an exponent >= floor is known, and
nothing below it is.  Exact elements (finite sums) have ``floor = NEG_INF``.
Arithmetic propagates the tightest floor that is provably correct and any query
below the floor raises :class:`PrecisionError`.
"""
from __future__ import annotations

from .field import NEG_INF, Field, FqElem, PrecisionError
from .poly import Poly

__all__ = ["LaurentNum", "poly_quotient_expand"]


def _eff_top(x: "LaurentNum"):
    # upper bound for the true ord: a zero-to-precision value is O(u^(floor-1))
    if x._d:
        return x.ord
    return x.floor - 1 if x.floor is not NEG_INF else NEG_INF


class LaurentNum:
    __slots__ = ("field", "_d", "floor")

    def __init__(self, field: Field, digits=None, floor=NEG_INF):
        """``digits`` maps exponent -> coefficient (int encoding, FqElem or int)."""
        d = {}
        for e, c in (digits or {}).items():
            c = field.coerce(c)
            if c and (floor is NEG_INF or e >= floor):
                d[int(e)] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_d", d)
        object.__setattr__(self, "floor", floor)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentNum is immutable")

    @classmethod
    def _raw(cls, field, d, floor):
        obj = object.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "_d", d)
        object.__setattr__(obj, "floor", floor)
        return obj

    # -- constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, field, floor=NEG_INF):
        return cls._raw(field, {}, floor)

    @classmethod
    def from_poly(cls, a: Poly):
        return cls._raw(a.field, {i: c for i, c in enumerate(a.coeffs) if c}, NEG_INF)

    @classmethod
    def from_digits(cls, field, top: int, digits, floor=None):
        """Digits for exponents top, top-1, ...; the floor defaults to the last one (exact if
        ``floor`` is NEG_INF)."""
        digits = list(digits)
        if floor is None:
            floor = top - len(digits) + 1
        return cls(field, {top - i: c for i, c in enumerate(digits)}, floor)

    @classmethod
    def u_power(cls, field, k: int, c=1):
        return cls(field, {k: c})

    @classmethod
    def random(cls, field, top: int, floor: int, rng, exact=False):
        """Uniform digits on exponents floor..top; exact=True declares the tail zero."""
        n = top - floor + 1
        digs = rng.integers(field.q, size=max(n, 0))
        d = {top - i: int(c) for i, c in enumerate(digs) if c}
        return cls._raw(field, d, NEG_INF if exact else floor)

    # -- queries -------------------------------------------------------------------
    @property
    def ord(self):
        return max(self._d) if self._d else NEG_INF

    def abs_exponent(self):
        """log_q |alpha| (NEG_INF when zero, exactly or to precision)."""
        return self.ord

    @property
    def is_exact(self) -> bool:
        return self.floor is NEG_INF

    def is_zero(self) -> bool:
        """True when zero to the tracked precision."""
        return not self._d

    def coefficient(self, i: int) -> int:
        if self.floor is not NEG_INF and i < self.floor:
            raise PrecisionError(f"insufficient precision: exponent {i} below floor {self.floor}")
        return self._d.get(i, 0)

    def __getitem__(self, i: int) -> int:
        return self.coefficient(i)

    def digits(self):
        """Sorted (exponent, coefficient) pairs of the nonzero digits, high to low."""
        return sorted(self._d.items(), reverse=True)

    def coefficient_vector(self, lo: int, hi: int):
        """Coefficients at exponents hi, hi-1, ..., lo."""
        return [self.coefficient(i) for i in range(hi, lo - 1, -1)]

    def fractional_part(self) -> "LaurentNum":
        return LaurentNum._raw(self.field, {e: c for e, c in self._d.items() if e <= -1}, self.floor)

    def integer_part(self) -> Poly:
        if self.floor is not NEG_INF and self.floor > 0:
            raise PrecisionError("insufficient precision for the polynomial part")
        top = self.ord
        if top is NEG_INF or top < 0:
            return Poly.zero(self.field)
        return Poly._raw(self.field, [self._d.get(i, 0) for i in range(top + 1)])

    def norm_exponent(self):
        """log_q ||alpha|| = ord {alpha}; NEG_INF when the fractional part vanishes."""
        return self.fractional_part().ord

    def norm_below(self, c: int) -> bool:
        """Decide ||alpha|| < q^c exactly, i.e. all digits at exponents c..-1 vanish."""
        if c > 0:
            return True
        if self.floor is not NEG_INF and c < self.floor:
            raise PrecisionError(f"insufficient precision: need exponent {c}, floor {self.floor}")
        return not any(c <= e <= -1 for e in self._d)

    def abs_below(self, c: int) -> bool:
        """Decide |alpha| < q^c exactly."""
        if self.floor is not NEG_INF and c < self.floor:
            if any(e >= c for e in self._d):
                return False
            raise PrecisionError(f"insufficient precision: need exponent {c}, floor {self.floor}")
        return not any(e >= c for e in self._d)

    def truncate(self, floor: int) -> "LaurentNum":
        """Forget digits below ``floor``."""
        if self.floor is not NEG_INF and floor < self.floor:
            raise PrecisionError("cannot raise precision by truncation")
        return LaurentNum._raw(self.field, {e: c for e, c in self._d.items() if e >= floor}, floor)

    # -- arithmetic ------------------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentNum):
            if other.field != self.field:
                raise ValueError("Laurent series over different fields")
            return other
        if isinstance(other, Poly):
            return LaurentNum.from_poly(other)
        if isinstance(other, (int, FqElem)):
            return LaurentNum.from_poly(Poly.constant(self.field, other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        floor = max(self.floor, o.floor)
        d = dict(self._d)
        for e, c in o._d.items():
            d[e] = F.add(d.get(e, 0), c)
        d = {e: c for e, c in d.items() if c and (floor is NEG_INF or e >= floor)}
        return LaurentNum._raw(F, d, floor)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return LaurentNum._raw(F, {e: F.neg(c) for e, c in self._d.items()}, self.floor)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        floor = max(self.floor + _eff_top(o), o.floor + _eff_top(self))
        d = {}
        for e1, c1 in self._d.items():
            for e2, c2 in o._d.items():
                e = e1 + e2
                if floor is not NEG_INF and e < floor:
                    continue
                d[e] = F.add(d.get(e, 0), F.mul(c1, c2))
        d = {e: c for e, c in d.items() if c}
        return LaurentNum._raw(F, d, floor)

    __rmul__ = __mul__

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._d == o._d and self.floor == o.floor

    def equals_to_precision(self, other) -> bool:
        """Equality of every digit both operands know."""
        diff = self - other
        return diff.is_zero()

    def __hash__(self):
        return hash((self.field, tuple(sorted(self._d.items())), self.floor))

    def __repr__(self):
        if not self._d:
            body = "0"
        else:
            parts = []
            for e, c in self.digits():
                cs = str(self.field.rep(c))
                parts.append(f"{cs}*u^{e}" if e != 0 else cs)
            body = " + ".join(parts)
        if self.floor is NEG_INF:
            return body
        return f"{body} + O(u^{self.floor - 1})"


def poly_quotient_expand(a: Poly, g: Poly, floor: int) -> LaurentNum:
    """Expand a/g in K_oo with every digit at exponent >= floor.

    Long division in descending powers of u.  The result carries ``floor`` as its
    precision floor (the expansion is generally infinite).
    """
    if g.is_zero():
        raise ZeroDivisionError("division by zero")
    F = a.field
    if a.is_zero():
        return LaurentNum.zero(F, floor)
    dg = g.deg
    inv = F.inv(g.lead)
    # remainder kept as dict exponent -> coeff
    rem = {i: c for i, c in enumerate(a.coeffs) if c}
    out = {}
    e = a.deg - dg
    while e >= floor and rem:
        top = e + dg
        c = rem.get(top, 0)
        if c:
            c = F.mul(c, inv)
            out[e] = c
            for j, y in enumerate(g.coeffs):
                if y:
                    k = e + j
                    v = F.sub(rem.get(k, 0), F.mul(c, y))
                    if v:
                        rem[k] = v
                    else:
                        rem.pop(k, None)
        e -= 1
    if not rem:
        return LaurentNum._raw(F, out, NEG_INF)
    return LaurentNum._raw(F, out, floor)
