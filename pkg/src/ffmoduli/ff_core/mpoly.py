"""Sparse multivariate polynomials over F_q (exponent-tuple maps).

Used for symbolic identities: bivariate expansion of f(g(u, v)), the Weyl
differencing identities, and the small-characteristic vanishing computation.
"""
from __future__ import annotations

from .field import Field, FqElem

__all__ = ["MPoly"]


class MPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms=None):
        t = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple of wrong length")
            c = field.coerce(c)
            if c:
                t[exps] = field.add(t.get(exps, 0), c)
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in t.items() if c}

    @classmethod
    def _raw(cls, field, nvars, terms):
        obj = object.__new__(cls)
        obj.field = field
        obj.nvars = nvars
        obj.terms = terms
        return obj

    @classmethod
    def var(cls, field, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls._raw(field, nvars, {tuple(e): 1})

    @classmethod
    def const(cls, field, nvars, c):
        c = field.coerce(c)
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {})

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def homogeneous_part(self, k):
        return MPoly._raw(self.field, self.nvars, {e: c for e, c in self.terms.items() if sum(e) == k})

    def _coerce(self, other):
        if isinstance(other, MPoly):
            if other.nvars != self.nvars or other.field != self.field:
                raise ValueError("incompatible polynomial rings")
            return other
        if isinstance(other, (int, FqElem)):
            return MPoly.const(self.field, self.nvars, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        F = self.field
        t = dict(self.terms)
        for e, c in o.terms.items():
            v = F.add(t.get(e, 0), c)
            if v:
                t[e] = v
            else:
                t.pop(e, None)
        return MPoly._raw(F, self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return MPoly._raw(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

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
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = F.add(t.get(e, 0), F.mul(c1, c2))
                if v:
                    t[e] = v
                else:
                    t.pop(e, None)
        return MPoly._raw(F, self.nvars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = MPoly.const(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def diff(self, i: int) -> "MPoly":
        F = self.field
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(c, F.from_int(e[i]))
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    t[tuple(ne)] = v
        return MPoly._raw(F, self.nvars, t)

    def evaluate(self, values):
        """Evaluate at ring elements supporting + and * (ints are read as field constants)."""
        F = self.field
        acc = None
        for e, c in self.terms.items():
            term = FqElem(F, c)
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            acc = term if acc is None else acc + term
        return acc if acc is not None else FqElem(F, 0)

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mon = "*".join(f"z{i}^{k}" if k > 1 else f"z{i}" for i, k in enumerate(e) if k)
            cs = str(self.field.rep(c))
            parts.append(f"{cs}*{mon}" if mon else cs)
        return " + ".join(parts)
