"""Dense univariate polynomials in u over F_q: the ring O = F_q[u]."""
from __future__ import annotations

from .field import NEG_INF, Field, FqElem

__all__ = ["Poly", "poly_gcd"]


class Poly:
    """Immutable polynomial; ``coeffs[i]`` is the (encoded) coefficient of u^i.

    The zero polynomial has an empty coefficient tuple and degree ``NEG_INF``.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs=()):
        cs = [field.coerce(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def _raw(cls, field, coeffs):
        obj = object.__new__(cls)
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "coeffs", tuple(cs))
        return obj

    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def constant(cls, field, c):
        return cls._raw(field, (field.coerce(c),))

    @classmethod
    def monomial(cls, field, k: int, c=1):
        return cls._raw(field, (0,) * k + (field.coerce(c),))

    @classmethod
    def u(cls, field):
        return cls.monomial(field, 1)

    @classmethod
    def random(cls, field, bound: int, rng, monic=False):
        """Uniform element with deg < bound (|f| < q^bound); monic forces deg = bound - 1."""
        if bound <= 0:
            return cls.zero(field)
        cs = [int(x) for x in rng.integers(field.q, size=bound)]
        if monic:
            cs[-1] = 1
        return cls._raw(field, cs)

    # -- basic queries -------------------------------------------------------
    @property
    def deg(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def abs_exponent(self):
        """log_q |f|, i.e. deg f (NEG_INF for 0)."""
        return self.deg

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError("negative index")
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == Poly.constant(self.field, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            cs = str(self.field.rep(c))
            if i == 0:
                terms.append(cs)
            else:
                mon = "u" if i == 1 else f"u^{i}"
                terms.append(mon if c == 1 else f"{cs}*{mon}")
        return " + ".join(terms)

    # -- ring operations -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, (int, FqElem)):
            return Poly.constant(self.field, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = F.add(out[i], y)
        return Poly._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly._raw(F, [F.neg(c) for c in self.coeffs])

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
        a, b = self.coeffs, o.coeffs
        if not a or not b:
            return Poly.zero(F)
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if y:
                    out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly._raw(F, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c) -> "Poly":
        F = self.field
        c = F.coerce(c)
        return Poly._raw(F, [F.mul(c, x) for x in self.coeffs])

    def shift(self, k: int) -> "Poly":
        """Multiply by u^k (k >= 0)."""
        if not self.coeffs:
            return self
        return Poly._raw(self.field, (0,) * k + self.coeffs)

    def divrem(self, other: "Poly"):
        o = self._coerce(other)
        if o is None or o.is_zero():
            raise ZeroDivisionError("division by zero")
        F = self.field
        rem = list(self.coeffs)
        db = len(o.coeffs) - 1
        inv = F.inv(o.lead)
        if len(rem) - 1 < db:
            return Poly.zero(F), self
        quo = [0] * (len(rem) - db)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            c = F.mul(c, inv)
            quo[i - db] = c
            for j, y in enumerate(o.coeffs):
                rem[i - db + j] = F.sub(rem[i - db + j], F.mul(c, y))
        return Poly._raw(F, quo), Poly._raw(F, rem)

    def __divmod__(self, other):
        return self.divrem(other)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def __call__(self, x):
        """Evaluate at an element of F_q (int encoding or FqElem)."""
        F = self.field
        xv = F.coerce(x)
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, xv), c)
        return FqElem(F, acc)

    def eval(self, x) -> FqElem:
        return self(x)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (the zero polynomial when both inputs vanish)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with g = s a + t b and g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = Poly.constant(F, 1), Poly.zero(F)
    t0, t1 = Poly.zero(F), Poly.constant(F, 1)
    while not r1.is_zero():
        qt, r = r0.divrem(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - qt * s1
        t0, t1 = t1, t0 - qt * t1
    if r0.is_zero():
        return r0, s0, t0
    c = F.inv(r0.lead)
    return r0.scale(c), s0.scale(c), t0.scale(c)
