"""Finite fields F_q, q = p^k, with elements encoded as integers in [0, q).

For k = 1 the integer is the residue itself.  For k > 1 the integer
``c_0 + c_1 p + ... + c_{k-1} p^{k-1}`` encodes ``c_0 + c_1 t + ... + c_{k-1} t^{k-1}``
in F_p[t]/(modulus).  Scalar methods work on Python ints, the ``v*`` methods on
numpy integer arrays of the same encoding.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NEG_INF",
    "Field",
    "GF",
    "FqElem",
    "is_prime",
    "is_irreducible",
    "find_irreducible",
    "PrecisionError",
]


class PrecisionError(ArithmeticError):
    """Raised when a query needs digits below a recorded precision floor."""


class _NegInf:
    """The sentinel -oo used for ord(0) and deg(0).

    It compares below every integer, absorbs addition with integers and is never
    equal to an int.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __hash__(self):
        return hash("ffmoduli.NEG_INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        if isinstance(other, (int, _NegInf)):
            return self
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            return self
        return NotImplemented

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- dense polynomials over F_p as coefficient lists, low degree first ---------

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pmod(a, m, p):
    a = list(a)
    inv = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(_ptrim(a)) - 1 >= dm:
        c = a[-1] * inv % p
        shift = len(a) - 1 - dm
        for i, y in enumerate(m):
            a[shift + i] = (a[shift + i] - c * y) % p
    return _ptrim(a)


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _ppowmod(base, e, m, p):
    result, base = [1], _pmod(base, m, p)
    while e:
        if e & 1:
            result = _pmod(_pmul(result, base, p), m, p)
        base = _pmod(_pmul(base, base, p), m, p)
        e >>= 1
    return result


def is_irreducible(modulus, p: int) -> bool:
    """Rabin-style test: gcd(m, t^(p^i) - t) = 1 for i <= k/2 (m monic, deg k)."""
    m = _ptrim([c % p for c in modulus])
    k = len(m) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(1, k // 2 + 1):
        xp = _ppowmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(m, _ptrim(diff), p)) - 1 > 0:
            return False
    return True


@functools.lru_cache(maxsize=None)
def find_irreducible(p: int, k: int) -> tuple:
    """Lexicographically first monic irreducible of degree k over F_p."""
    for tail in itertools.product(range(p), repeat=k):
        cand = list(reversed(tail)) + [1]
        if cand[0] == 0 and k > 1:
            continue
        if is_irreducible(cand, p):
            return tuple(cand)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class Field:
    """F_q with q = p^k; use :func:`GF` to get cached instances."""

    MAX_Q = 1 << 16

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.k = k
        self.q = p**k
        if self.q > self.MAX_Q:
            raise ValueError(f"q = {self.q} exceeds the supported size {self.MAX_Q}")
        if k == 1:
            self.modulus = None
        else:
            if modulus is None:
                modulus = find_irreducible(p, k)
            m = tuple(int(c) % p for c in modulus)
            if len(m) != k + 1 or m[-1] != 1:
                raise ValueError("modulus must be monic of degree k, low coefficient first")
            if not is_irreducible(m, p):
                raise ValueError(f"modulus {m} is reducible over F_{p}")
            self.modulus = m
            self._build_tables()

    # -- table construction for k > 1 -------------------------------------
    def _slow_mul(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        da = [(a // p**i) % p for i in range(k)]
        db = [(b // p**i) % p for i in range(k)]
        r = _pmod(_pmul(_ptrim(da), _ptrim(db), p), list(self.modulus), p)
        return sum(c * p**i for i, c in enumerate(r))

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            powers = [1]
            for _ in range(q - 2):
                powers.append(self._slow_mul(powers[-1], g))
            if len(set(powers)) == q - 1:
                break
        else:  # pragma: no cover - a primitive element always exists
            raise RuntimeError("no primitive element found")
        exp = np.array(powers + powers, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        log[np.array(powers)] = np.arange(q - 1)
        self._exp = exp
        self._log = log
        self._digits = np.array(
            [[(a // self.p**i) % self.p for i in range(self.k)] for a in range(q)], dtype=np.int64
        )
        self._weights = np.array([self.p**i for i in range(self.k)], dtype=np.int64)
        tr = []
        for a in range(q):
            s, x = 0, a
            for _ in range(self.k):
                s = self._add_ext(s, x)
                x = self._pow_ext(x, self.p)
            tr.append(s)
        self._trace = np.array(tr, dtype=np.int64)

    def _add_ext(self, a, b):
        p = self.p
        out, w = 0, 1
        for _ in range(self.k):
            out += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def _pow_ext(self, a, e):
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])

    # -- identity ---------------------------------------------------------
    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, modulus={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return (GF, (self.p, self.k, self.modulus))

    @property
    def is_prime_field(self) -> bool:
        return self.k == 1

    # -- scalar arithmetic ------------------------------------------------
    def __call__(self, x) -> "FqElem":
        return FqElem(self, self.coerce(x))

    def coerce(self, x) -> int:
        """Map an int, FqElem or digit sequence to the encoding.

        For k = 1 an int is reduced mod p.  For k > 1 an int must already be an
        encoding in [0, q); arithmetic with FqElem reads ints as multiples of 1.
        """
        if isinstance(x, FqElem):
            if x.field != self:
                raise ValueError("element from a different field")
            return x.value
        if isinstance(x, (int, np.integer)):
            if self.k == 1:
                return int(x) % self.p
            if not 0 <= x < self.q:
                raise ValueError(f"{x} is not an element encoding of {self!r}")
            return int(x)
        digits = [int(c) % self.p for c in x]
        if len(digits) != self.k:
            raise ValueError(f"expected {self.k} coefficients, got {len(digits)}")
        return sum(c * self.p**i for i, c in enumerate(digits))

    def rep(self, a: int):
        if self.k == 1:
            return a
        return tuple((a // self.p**i) % self.p for i in range(self.k))

    def elements(self):
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        return self._add_ext(a, b)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        out, w = 0, 1
        for _ in range(self.k):
            out += ((-(a % p)) % p) * w
            a //= p
            w *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        return int(self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if self.k == 1:
            return pow(a, e, self.p)
        return self._pow_ext(a, e)

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an int in [0, p)."""
        if self.k == 1:
            return a
        return int(self._trace[a])

    def from_int(self, n: int) -> int:
        return n % self.p

    def random(self, rng) -> int:
        return int(rng.integers(self.q))

    # -- vectorised arithmetic on encoded arrays --------------------------
    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        da = self._digits[a]
        db = self._digits[b]
        return ((da + db) % self.p) @ self._weights

    def vneg(self, a):
        if self.k == 1:
            return (-np.asarray(a)) % self.p
        return ((-self._digits[np.asarray(a)]) % self.p) @ self._weights

    def vsub(self, a, b):
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def vscale(self, c: int, a):
        return self.vmul(np.int64(c), a)

    def vsum(self, a, axis):
        """Field sum along an axis."""
        a = np.asarray(a)
        if self.k == 1:
            return a.sum(axis=axis) % self.p
        digits = self._digits[a]
        return (digits.sum(axis=axis if axis >= 0 else axis - 1) % self.p) @ self._weights

    def vtrace(self, a):
        if self.k == 1:
            return np.asarray(a)
        return self._trace[np.asarray(a)]

    def vinv(self, a):
        a = np.asarray(a)
        if self.k == 1:
            table = np.array([0] + [pow(x, self.p - 2, self.p) for x in range(1, self.p)], dtype=np.int64)
            return table[a]
        return np.where(a == 0, 0, self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)])


@functools.lru_cache(maxsize=None)
def _gf_cached(p, k, modulus):
    return Field(p, k, modulus)


def GF(p: int, k: int = 1, modulus=None) -> Field:
    """Cached field constructor.  ``modulus`` is low-coefficient-first and monic."""
    if modulus is not None:
        modulus = tuple(int(c) for c in modulus)
    elif k > 1:
        modulus = find_irreducible(p, k)
    return _gf_cached(p, k, modulus)


@dataclass(frozen=True)
class FqElem:
    """An element of F_q with operator overloading; ``value`` is the integer encoding."""

    field: Field
    value: int

    @property
    def rep(self):
        return self.field.rep(self.value)

    def _other(self, other):
        if isinstance(other, FqElem):
            if other.field != self.field:
                raise ValueError("elements from different fields")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.field.from_int(int(other))
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FqElem(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FqElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        o = self._other(other)
        return o is not None and o == self.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.rep}"

    def trace(self) -> int:
        return self.field.trace(self.value)
