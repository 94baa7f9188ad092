"""Hypersurfaces, their symmetric tensors, the forms F_j and the bidegree pieces G_j."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from ._batch import contract_all, eval_monomials, is_zero_rows, poly_rows, with_poly_axis
from .errors import BudgetExceeded, ContractViolation
from .ff_core import GF, Field, FqElem, MPoly, Poly

__all__ = [
    "Hypersurface",
    "SymTensor",
    "tensor_from_form",
    "gamma_eval",
    "FormSystem",
    "build_F_system",
    "MorphismCoeffs",
    "decomposition_sides",
    "decomposition_check",
    "BidegreeForm",
    "build_G_j",
    "bidegree_from_matrix",
    "bidegree_from_form",
    "split_index",
    "smoothness_check",
    "fermat_smallchar_check",
    "SmallCharReport",
    "DEFAULT_SMOOTH_BUDGET",
    "DEFAULT_SYMBOLIC_BUDGET",
]

DEFAULT_SMOOTH_BUDGET = 1 << 24
DEFAULT_SYMBOLIC_BUDGET = 1 << 20


def _orderings(exps) -> int:
    """Number of distinct index orderings of a monomial with these exponents."""
    out = math.factorial(sum(exps))
    for e in exps:
        out //= math.factorial(e)
    return out


@dataclass(frozen=True, eq=False)
class Hypersurface:
    """A homogeneous form f of degree d in n variables over ``field``.

    ``monomials`` maps exponent tuples to coefficients in the field encoding.
    """

    field: Field
    n: int
    d: int
    monomials: dict

    def __post_init__(self):
        F = self.field
        clean = {}
        for exps, c in dict(self.monomials).items():
            exps = tuple(int(x) for x in exps)
            if len(exps) != self.n:
                raise ValueError(f"monomial {exps} does not have {self.n} exponents")
            if sum(exps) != self.d or min(exps) < 0:
                raise ValueError(f"monomial {exps} is not of degree {self.d}")
            c = F.coerce(c)
            if c:
                clean[exps] = F.add(clean.get(exps, 0), c)
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            raise ValueError("hypersurface has no nonzero coefficient")
        object.__setattr__(self, "monomials", clean)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def p(self) -> int:
        return self.field.p

    def __eq__(self, other):
        return (
            isinstance(other, Hypersurface)
            and self.field == other.field
            and (self.n, self.d) == (other.n, other.d)
            and self.monomials == other.monomials
        )

    def __hash__(self):
        return hash((self.field, self.n, self.d, tuple(sorted(self.monomials.items()))))

    def __repr__(self):
        parts = []
        for exps, c in sorted(self.monomials.items(), reverse=True):
            mon = "*".join(f"x{i + 1}^{k}" if k > 1 else f"x{i + 1}" for i, k in enumerate(exps) if k)
            parts.append(f"{self.field.rep(c)}*{mon}")
        return f"Hypersurface({' + '.join(parts)} over {self.field})"

    # -- constructors ----------------------------------------------------------
    @classmethod
    def from_dict(cls, data: dict) -> "Hypersurface":
        """Read the JSON config layout {"p","k","n","d","monomials":[{"exps","c"}]}."""
        p, k = int(data["p"]), int(data.get("k", 1))
        modulus = data.get("modulus")
        F = GF(p, k, modulus)
        mons = {}
        for m in data["monomials"]:
            exps = tuple(m["exps"])
            c = m["c"]
            c = F.coerce(c if isinstance(c, int) else list(c))
            mons[exps] = F.add(mons.get(exps, 0), c)
        return cls(F, int(data["n"]), int(data["d"]), mons)

    def to_dict(self) -> dict:
        F = self.field
        out = {"p": F.p, "k": F.k, "n": self.n, "d": self.d}
        if F.k > 1:
            out["modulus"] = list(F.modulus)
        out["monomials"] = [
            {"exps": list(e), "c": c if F.k == 1 else list(F.rep(c))} for e, c in sorted(self.monomials.items())
        ]
        return out

    @classmethod
    def fermat(cls, field: Field, n: int, d: int) -> "Hypersurface":
        mons = {}
        for i in range(n):
            e = [0] * n
            e[i] = d
            mons[tuple(e)] = 1
        return cls(field, n, d, mons)

    @classmethod
    def random(cls, field: Field, n: int, d: int, rng) -> "Hypersurface":
        exps = [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]
        while True:
            mons = {e: int(rng.integers(field.q)) for e in exps}
            if any(mons.values()):
                return cls(field, n, d, mons)

    # -- transformations ---------------------------------------------------------
    def permuted(self, perm) -> "Hypersurface":
        """Substitute x_i -> x_perm[i]."""
        mons = {}
        for exps, c in self.monomials.items():
            new = [0] * self.n
            for i, e in enumerate(exps):
                new[perm[i]] += e
            mons[tuple(new)] = c
        return Hypersurface(self.field, self.n, self.d, mons)

    def scaled(self, c) -> "Hypersurface":
        F = self.field
        c = F.coerce(c)
        return Hypersurface(self.field, self.n, self.d, {e: F.mul(c, v) for e, v in self.monomials.items()})

    # -- evaluation --------------------------------------------------------------
    def as_mpoly(self) -> MPoly:
        return MPoly(self.field, self.n, self.monomials)

    def __call__(self, x):
        """Evaluate at a point of F_q^n (ints or FqElem) or at Poly/ring values."""
        return self.as_mpoly().evaluate([self.field(v) if isinstance(v, int) else v for v in x])

    def eval_batch(self, X, field: Optional[Field] = None):
        """f at points X of shape (B, n); ``field`` may be an extension of the prime base."""
        F = field or self.field
        return eval_monomials(F, self.monomials.items(), X)

    def gradient_terms(self):
        """Monomial maps of the partial derivatives."""
        mp = self.as_mpoly()
        return [mp.diff(i).terms for i in range(self.n)]


@dataclass(frozen=True, eq=False)
class SymTensor:
    """Symmetric coefficients c_{i_1..i_d}, stored on sorted index tuples (0-based)."""

    field: Field
    n: int
    d: int
    entries: dict

    def dense(self):
        """The full (n,)*d coefficient array."""
        C = np.zeros((self.n,) * self.d, dtype=np.int64)
        for key, c in self.entries.items():
            for perm in set(itertools.permutations(key)):
                C[perm] = c
        return C

    def to_form(self) -> Hypersurface:
        """Rebuild f = sum c x_{i_1} ... x_{i_d} from the tensor."""
        F = self.field
        mons = {}
        for key, c in self.entries.items():
            exps = [0] * self.n
            for i in key:
                exps[i] += 1
            mons[tuple(exps)] = F.mul(c, F.from_int(_orderings(exps)))
        return Hypersurface(F, self.n, self.d, mons)

    def __getitem__(self, idx):
        return self.entries.get(tuple(sorted(idx)), 0)


def tensor_from_form(f: Hypersurface) -> SymTensor:
    F = f.field
    if F.p <= f.d:
        raise ValueError("characteristic too small for symmetrization")
    entries = {}
    for exps, c in f.monomials.items():
        key = tuple(i for i, e in enumerate(exps) for _ in range(e))
        entries[key] = F.div(c, F.from_int(_orderings(exps)))
    return SymTensor(F, f.n, f.d, entries)


def _as_vector_batch(F: Field, vec):
    """Convert an n-vector of Poly / FqElem / int to a (1, n, L) array; report the kind."""
    scalar = all(not isinstance(v, Poly) for v in vec)
    if scalar:
        arr = np.array([[F.coerce(v)] for v in vec], dtype=np.int64)
        return arr[None], True
    L = max(max(len(v.coeffs), 1) if isinstance(v, Poly) else 1 for v in vec)
    return poly_rows(vec, L)[None], False


def gamma_eval(c: SymTensor, *vectors):
    """Gamma_f(x_1, ..., x_d) for n-vectors of Poly or field elements."""
    if len(vectors) != c.d:
        raise ValueError(f"expected {c.d} vectors, got {len(vectors)}")
    F = c.field
    slots, scalar = [], True
    for v in vectors:
        if len(v) != c.n:
            raise ValueError("dimension mismatch")
        arr, sc = _as_vector_batch(F, v)
        slots.append(arr)
        scalar &= sc
    val = contract_all(F, with_poly_axis(c.dense()), slots)[0]
    if scalar:
        return FqElem(F, int(val[0]))
    return Poly(F, [int(x) for x in val])


def _multisets(d: int, e: int, j: int):
    """Sorted slot-degree tuples (s_1 <= ... <= s_d) in [0, e] with sum j."""
    return [s for s in itertools.combinations_with_replacement(range(e + 1), d) if sum(s) == j]


def _multiset_weight(s) -> int:
    out = math.factorial(len(s))
    for m in Counter(s).values():
        out //= math.factorial(m)
    return out


@dataclass(frozen=True, eq=False)
class MorphismCoeffs:
    """g_hat = (g_0, ..., g_e) with g[i][s] in F_q[u] of degree <= s."""

    field: Field
    n: int
    e: int
    g: tuple

    def __post_init__(self):
        g = tuple(tuple(row) for row in self.g)
        if len(g) != self.n or any(len(row) != self.e + 1 for row in g):
            raise ValueError("g must be an n x (e+1) array of polynomials")
        for row in g:
            for s, a in enumerate(row):
                if a.deg > s:
                    raise ValueError(f"deg g_(i,{s}) exceeds {s}")
        object.__setattr__(self, "g", g)

    @classmethod
    def random(cls, field: Field, n: int, e: int, rng) -> "MorphismCoeffs":
        return cls(field, n, e, [[Poly.random(field, s + 1, rng) for s in range(e + 1)] for _ in range(n)])

    @classmethod
    def zero(cls, field: Field, n: int, e: int) -> "MorphismCoeffs":
        return cls(field, n, e, [[Poly.zero(field)] * (e + 1) for _ in range(n)])

    @classmethod
    def from_slots(cls, field: Field, slots) -> "MorphismCoeffs":
        """From per-slot arrays of shape (n, s+1)."""
        n, e = slots[0].shape[0], len(slots) - 1
        return cls(field, n, e, [[Poly(field, [int(c) for c in slots[s][i]]) for s in range(e + 1)] for i in range(n)])

    def slot(self, s: int):
        """t_s = (g_{1,s}, ..., g_{n,s})."""
        return [self.g[i][s] for i in range(self.n)]

    def slot_arrays(self):
        """Per-slot arrays of shape (1, n, s+1)."""
        return [poly_rows(self.slot(s), s + 1)[None] for s in range(self.e + 1)]


class FormSystem:
    """The forms F_0, ..., F_de attached to a symmetric tensor and a degree e.

    F_j is evaluated as a sum over multisets {s_1, ..., s_d} of slot degrees with
    sum j, each weighted by its number of orderings (reduced mod p).
    """

    def __init__(self, tensor: SymTensor, e: int):
        if e < 1:
            raise ValueError("e must be >= 1")
        self.tensor = tensor
        self.field = tensor.field
        self.n = tensor.n
        self.d = tensor.d
        self.e = e
        self.C = with_poly_axis(tensor.dense())
        F = self.field
        self.terms = {
            j: [(s, F.from_int(_multiset_weight(s))) for s in _multisets(self.d, e, j)]
            for j in range(self.d * e + 1)
        }

    @property
    def num_forms(self) -> int:
        return self.d * self.e + 1

    @property
    def slot_bounds(self):
        return tuple(s + 1 for s in range(self.e + 1))

    def F_batch(self, j: int, slots):
        """F_j on a batch: ``slots[s]`` has shape (B, n, s+1); returns (B, j+1)."""
        F = self.field
        B = next(x.shape[0] for x in slots if x is not None)
        out = np.zeros((B, j + 1), dtype=np.int64)
        for s, w in self.terms[j]:
            if not w:
                continue
            val = contract_all(F, self.C, [slots[k] for k in s])
            out = F.vadd(out, F.vscale(w, val))
        return out

    def F_batch_cached(self, j: int, slots, root_cache):
        """F_j with t_0 fixed: ``root_cache[m]`` is the tensor contracted m times with t_0."""
        F = self.field
        B = slots[1].shape[0] if len(slots) > 1 else 1
        out = np.zeros((B, j + 1), dtype=np.int64)
        for s, w in self.terms[j]:
            if not w:
                continue
            m = s.count(0)
            rest = [slots[k] for k in s if k != 0]
            if not rest:
                val = np.broadcast_to(root_cache[m][None], (B, j + 1))
            else:
                val = contract_all(F, root_cache[m], rest)
            out = F.vadd(out, F.vscale(w, val))
        return out

    def root_cache(self, t0):
        """Contractions of the tensor with the constant vector t0 (shape (n,)), m = 0..d."""
        F = self.field
        cache = [self.C]
        T = self.C
        x = np.asarray(t0, dtype=np.int64).reshape(1, self.n, 1)
        for _ in range(self.d):
            T = contract_all(F, T, [x])[0]
            cache.append(T)
        return cache

    def F(self, j: int, g: MorphismCoeffs) -> Poly:
        if not 0 <= j <= self.d * self.e:
            raise ValueError("j out of range")
        val = self.F_batch(j, g.slot_arrays())[0]
        return Poly(self.field, [int(x) for x in val])

    def all_F(self, g: MorphismCoeffs):
        return [self.F(j, g) for j in range(self.num_forms)]

    def vanishing_mask(self, slots, order=None):
        """Rows where every F_j vanishes."""
        B = slots[0].shape[0]
        alive = np.ones(B, dtype=bool)
        for j in order or range(self.num_forms):
            alive &= is_zero_rows(self.F_batch(j, slots))
        return alive


def build_F_system(c: SymTensor, e: int) -> FormSystem:
    return FormSystem(c, e)


def _mpoly_uv(F: Field, a: Poly, vpow: int) -> MPoly:
    return MPoly(F, 2, {(k, vpow): c for k, c in enumerate(a.coeffs) if c})


def decomposition_sides(f: Hypersurface, g: MorphismCoeffs):
    """Both sides of f(g(u, v)) = sum_j v^(de-j) F_j(g_hat).

    The left side substitutes g_i(u, v) = sum_s g_{i,s}(u) v^(e-s) into the
    monomials of f and reads off the v^(de-j) coefficient; the right side comes
    from the tensor-based F_j.  Returns two lists of Poly indexed by j.
    """
    F = f.field
    d, e = f.d, g.e
    gi = []
    for i in range(f.n):
        acc = MPoly(F, 2)
        for s in range(e + 1):
            acc = acc + _mpoly_uv(F, g.g[i][s], e - s)
        gi.append(acc)
    total = MPoly(F, 2)
    for exps, c in f.monomials.items():
        term = MPoly.const(F, 2, FqElem(F, c))
        for i, k in enumerate(exps):
            if k:
                term = term * gi[i] ** k
        total = total + term
    lhs = []
    for j in range(d * e + 1):
        vp = d * e - j
        coeffs = {}
        for (ku, kv), c in total.terms.items():
            if kv == vp:
                coeffs[ku] = c
        top = max(coeffs, default=-1)
        lhs.append(Poly(F, [coeffs.get(k, 0) for k in range(top + 1)]))
    system = FormSystem(tensor_from_form(f), e)
    rhs = system.all_F(g)
    return lhs, rhs


def decomposition_check(f: Hypersurface, g: MorphismCoeffs) -> bool:
    lhs, rhs = decomposition_sides(f, g)
    return all(a == b for a, b in zip(lhs, rhs))


def split_index(d: int, j: int):
    """Write j = (l-1) d + r with 1 <= r <= d; returns (l, r)."""
    r = j % d or d
    return (j - r) // d + 1, r


@dataclass(frozen=True, eq=False)
class BidegreeForm:
    """A form G(x; y) of bidegree (d1, d2) through its multilinear coefficients.

    ``coeffs`` has shape (n,)*d with the d1 x-indices first; Gamma_G contracts
    one vector per index.  ``C0`` and the index data are set when the form is
    a piece G_j of a system of F_j.
    """

    field: Field
    n: int
    d1: int
    d2: int
    coeffs: np.ndarray
    C0: int = 1
    j: Optional[int] = None
    ell: Optional[int] = None
    r: Optional[int] = None
    P1: Optional[int] = None
    P2: Optional[int] = None
    exponent_identity: Optional[bool] = None
    source: Optional[SymTensor] = dc_field(default=None, repr=False)

    @property
    def d(self) -> int:
        return self.d1 + self.d2

    @property
    def tensor(self):
        return with_poly_axis(self.coeffs)

    def gamma_batch(self, xs, ys):
        """Gamma_G on batches: xs (d1 arrays) and ys (d2 arrays) of shape (B, n, L)."""
        return contract_all(self.field, self.tensor, list(xs) + list(ys))

    def gamma(self, xs, ys):
        """Gamma_G(x_1..x_d1; y_1..y_d2) on n-vectors of Poly or field elements."""
        F = self.field
        slots, scalar = [], True
        for v in list(xs) + list(ys):
            arr, sc = _as_vector_batch(F, v)
            slots.append(arr)
            scalar &= sc
        val = self.gamma_batch(slots[: self.d1], slots[self.d1 :])[0]
        if scalar:
            return FqElem(F, int(val[0]))
        return Poly(F, [int(x) for x in val])

    def __call__(self, x, y):
        """G(x; y) = Gamma_G(x, ..., x; y, ..., y)."""
        return self.gamma([x] * self.d1, [y] * self.d2)

    def grad_y_terms(self):
        """Monomial maps (over 2n variables x, y) of dG/dy_i, i = 1..n."""
        F = self.field
        n = self.n
        G = {}
        for idx in itertools.product(range(n), repeat=self.d):
            c = int(self.coeffs[idx])
            if not c:
                continue
            exps = [0] * (2 * n)
            for i in idx[: self.d1]:
                exps[i] += 1
            for i in idx[self.d1 :]:
                exps[n + i] += 1
            G[tuple(exps)] = F.add(G.get(tuple(exps), 0), c)
        mp = MPoly(F, 2 * n, G)
        return [mp.diff(n + i).terms for i in range(n)]


def build_G_j(c: SymTensor, e: int, j: int) -> BidegreeForm:
    """The piece G_j of the F_j system, with C0 checked against the composition count."""
    d = c.d
    if not 0 <= j <= d * e:
        raise ValueError("j out of range")
    F = c.field
    ell, r = split_index(d, j)
    if r < d:
        slots = (ell - 1, ell)
        d1, d2 = d - r, r
        P1, P2 = ell, ell + 1
        ident = -(d - r) * ell - r * (ell + 1) + d - 1 == -j - 1
    else:
        slots = (ell,)
        d1, d2 = 0, d
        P1 = P2 = ell + 1
        ident = -d * (ell + 1) + d - 1 == -j - 1
    count = sum(1 for s in itertools.product(slots, repeat=d) if sum(s) == j)
    C0 = F.from_int(math.comb(d, r) if r < d else 1)
    if F.from_int(count) != C0:
        raise ContractViolation(f"composition count {count} disagrees with C0 for j={j}")
    if not C0:
        raise ContractViolation("C0 vanishes mod p")
    coeffs = F.vscale(C0, c.dense())
    return BidegreeForm(F, c.n, d1, d2, coeffs, C0, j, ell, r, P1, P2, ident, c)


def bidegree_from_matrix(field: Field, A) -> BidegreeForm:
    """The bilinear form G(x; y) = x^T A y (d1 = d2 = 1)."""
    A = np.asarray(A, dtype=np.int64) % field.q if field.k == 1 else np.asarray(A, dtype=np.int64)
    return BidegreeForm(field, A.shape[0], 1, 1, A)


def bidegree_from_form(f: Hypersurface, d1: int, C0=1) -> BidegreeForm:
    """G(x; y) = C0 Gamma_f(x, ..., x, y, ..., y) with x in the first d1 slots."""
    c = tensor_from_form(f)
    F = f.field
    C0 = F.coerce(C0)
    return BidegreeForm(F, f.n, d1, f.d - d1, F.vscale(C0, c.dense()), C0, source=c)


# -- smoothness ------------------------------------------------------------------

def _projective_points(F: Field, n: int, start: int, stop: int):
    """Points of P^(n-1)(F) normalised with first nonzero coordinate 1, flat range."""
    q = F.q
    # block k holds points whose first nonzero coordinate is k: q^(n-1-k) of them
    out = []
    pos = 0
    for k in range(n):
        size = q ** (n - 1 - k)
        lo, hi = max(start, pos), min(stop, pos + size)
        if lo < hi:
            idx = np.arange(lo - pos, hi - pos, dtype=np.int64)
            pts = np.zeros((idx.size, n), dtype=np.int64)
            pts[:, k] = 1
            for c in range(n - 1, k, -1):
                pts[:, c] = idx % q
                idx //= q
            out.append(pts)
        pos += size
    return np.concatenate(out) if out else np.zeros((0, n), dtype=np.int64)


def common_zero_search(terms_list, base: Field, n: int, m: int, budget: int, chunk: int = 1 << 16):
    """First projective point over F_{q^m} where every polynomial in ``terms_list`` vanishes.

    Polynomials are monomial maps with coefficients in the prime field (so they
    embed unchanged in the extension).  Returns the point or None.
    """
    if base.k != 1:
        raise NotImplementedError("extension-field searches need a prime base field")
    E = GF(base.p, m)
    total = (E.q**n - 1) // (E.q - 1)
    if total > budget:
        raise BudgetExceeded(f"budget exceeded: {total} points over F_{E.q} (limit {budget})")
    lo = 0
    while lo < total:
        hi = min(total, lo + chunk)
        pts = _projective_points(E, n, lo, hi)
        alive = np.ones(pts.shape[0], dtype=bool)
        for terms in terms_list:
            if not alive.any():
                break
            alive &= eval_monomials(E, terms.items(), pts) == 0
        if alive.any():
            return pts[np.argmax(alive)].tolist()
        lo = hi
    return None


def smoothness_check(f: Hypersurface, m_max: int = 1, budget: int = DEFAULT_SMOOTH_BUDGET) -> bool:
    """Look for a nonzero common zero of grad f over F_{q^m}, m <= m_max.

    False means a singular point was found.  True only certifies that none
    exists over the fields searched; it is evidence, not a proof of smoothness
    over the algebraic closure.
    """
    grads = f.gradient_terms()
    for m in range(1, m_max + 1):
        if common_zero_search(grads, f.field, f.n, m, budget) is not None:
            return False
    return True


# -- small characteristic ---------------------------------------------------------

@dataclass
class SmallCharReport:
    e: int
    p: int
    d: int
    n: int
    stated_shape: bool
    F_next_vanishes: bool
    nonzero_terms: int
    binom_d_e1: int
    binom_d_e1_mod_p: int
    kummer_carries: int
    kummer_valuation: int
    chains: int
    chains_with_d_minus_1: int
    vanishing_binomials: int
    chain_details: list

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}


def _vp(x: int, p: int) -> int:
    if x == 0:
        return 10**9
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _carries(a: int, b: int, p: int) -> int:
    carry = count = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        count += carry
        a //= p
        b //= p
    return count


def _truncated_power(e: int, d: int, p: int, budget: int):
    """[w^(e+1)] of (sum_{s=0}^e g_s w^s)^d over Z/p, as {exponent tuple: coeff}.

    Polynomials are dicts keyed by exponent tuples of (g_0..g_e); the w-degree of
    a monomial is sum s * k_s, and everything above e+1 is dropped.
    """
    top = e + 1

    def weight(k):
        return sum(s * x for s, x in enumerate(k))

    def mul(a, b):
        out = {}
        for ka, ca in a.items():
            wa = weight(ka)
            for kb, cb in b.items():
                if wa + weight(kb) > top:
                    continue
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = (out.get(k, 0) + ca * cb) % p
                if len(out) > budget:
                    raise BudgetExceeded("budget exceeded: symbolic workspace")
        return {k: c for k, c in out.items() if c}

    base = {}
    for s in range(e + 1):
        k = [0] * (e + 1)
        k[s] = 1
        base[tuple(k)] = 1
    result = {(0,) * (e + 1): 1}
    x, k = base, d
    while k:
        if k & 1:
            result = mul(result, x)
        k >>= 1
        if k:
            x = mul(x, x)
    return {key: c for key, c in result.items() if weight(key) == top}


def _chains(e: int):
    """Tuples (r_1, ..., r_e) with e r_e + ... + 2 r_2 + r_1 = e + 1."""
    out = []

    def rec(s, remaining, acc):
        if s == 0:
            if remaining == 0:
                out.append(tuple(reversed(acc)))
            return
        for r in range(remaining // s + 1):
            rec(s - 1, remaining - s * r, acc + [r])

    rec(e, e + 1, [])
    return out


def fermat_smallchar_check(
    e: int, p: int, d: Optional[int] = None, n: int = 2, budget: int = DEFAULT_SYMBOLIC_BUDGET
) -> SmallCharReport:
    """Vanishing of F_(e+1) for the Fermat form of degree d = (e+1)! p + 1 in characteristic p.

    F_(e+1) = sum_i [w^(e+1)] (sum_s g_{i,s} w^s)^d, expanded symbolically with the
    g_{i,s} as indeterminates.  The n variables contribute identical pieces in
    disjoint indeterminates, so F_(e+1) is zero iff one piece is; the full
    n-variable polynomial is still assembled for the term count.
    """
    stated = math.factorial(e + 1) * p + 1
    if d is None:
        d = stated
    piece = _truncated_power(e, d, p, budget)
    nonzero = n * len(piece)
    vanishes = nonzero == 0
    b = math.comb(d, e + 1)
    carries = _carries(e + 1, d - e - 1, p)
    val = _vp(b, p)
    if carries != val:
        raise ContractViolation("Kummer carry count disagrees with the p-adic valuation")
    details = []
    with_dm1 = vanishing = 0
    for chain in _chains(e):
        # chain is (r_1, ..., r_e); binomials taken in the order r_e, r_{e-1}, ..., r_1
        used = 0
        numerators, binoms = [], []
        for s in range(e, 0, -1):
            r = chain[s - 1]
            top = d - used
            binoms.append(math.comb(top, r))
            numerators.extend(range(top, top - r, -1))
            used += r
        coeff = math.prod(binoms)
        has = (d - 1) in numerators
        high = any(chain[s - 1] for s in range(2, e + 1))
        with_dm1 += has
        vanishing += coeff % p == 0
        details.append({"r": list(chain), "coefficient_mod_p": coeff % p, "has_d_minus_1": has, "uses_higher_slots": high})
    report = SmallCharReport(
        e, p, d, n, d == stated, vanishes, nonzero, b, b % p, carries, val,
        len(details), with_dm1, vanishing, details,
    )
    if d == stated:
        if not vanishes or b % p:
            raise ContractViolation(f"F_{e + 1} does not vanish for d = {d}, p = {p}")
        for item in details:
            if item["uses_higher_slots"] and not item["has_d_minus_1"]:
                raise ContractViolation("a coefficient chain misses the factor d - 1")
    return report
