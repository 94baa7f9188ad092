"""The codimension sigma_G of the auxiliary locus V* attached to a bidegree form.

V* depends on the shape of G:
  d1 >= 1, d2 >= 2: {(x, y) : dG/dy_i = 0 for all i} in 2n-space;
  d1 >= 1, d2 = 1:  {x : dG/dy_i = 0} in n-space (the derivatives only involve x);
  d1 = 0:           {y : grad G(y) = 0} in n-space.
sigma_G is the ambient dimension minus dim V*.  When the defining equations are
linear the dimension is exact by rank-nullity; otherwise it is estimated from
point counts over F_(q^m), which is a heuristic and reported as such.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .._batch import eval_monomials
from ..counting import budget_from_env
from ..errors import BudgetExceeded
from ..ff_core import GF, batch_rank, rank
from ..ff_core.box import DEFAULT_CHUNK, index_to_digits, iter_chunks
from ..forms import BidegreeForm

__all__ = ["SigmaReport", "sigma_estimate", "locus_equations"]


@dataclass
class SigmaReport:
    case: str
    ambient: int
    counts: List[int] = field(default_factory=list)
    estimates: List[int] = field(default_factory=list)
    dim_estimate: int = 0
    sigma: int = 0
    method: str = "rank"
    heuristic: bool = False

    def to_dict(self):
        return {
            "case": self.case,
            "ambient": self.ambient,
            "counts": [str(c) for c in self.counts],
            "estimates": list(self.estimates),
            "dim_estimate": self.dim_estimate,
            "sigma": self.sigma,
            "method": self.method,
            "heuristic": self.heuristic,
        }


def locus_equations(G: BidegreeForm):
    """(case label, ambient dimension, variable offset, equations as monomial maps).

    Monomial maps are over the 2n variables (x, y); ``offset`` marks where the
    ambient coordinates start (0 for x, n for y).
    """
    n = G.n
    grads = G.grad_y_terms()
    if G.d1 >= 1 and G.d2 >= 2:
        return "x,y", 2 * n, 0, grads
    if G.d1 >= 1:
        return "x", n, 0, grads
    return "y", n, n, grads


def _restrict(terms, offset: int, width: int):
    """Drop the unused half of each exponent tuple."""
    return [(e[offset : offset + width], c) for e, c in terms.items()]


def _linear_matrix(eqs, nv: int):
    """Coefficient matrix of homogeneous linear equations, or None if some term is not linear."""
    M = [[0] * nv for _ in eqs]
    for i, eq in enumerate(eqs):
        for e, c in eq:
            if sum(e) != 1:
                return None
            M[i][e.index(1)] = c
    return M


def _fiber_matrices(G: BidegreeForm, grads, linear_in: str):
    """Entries M[i][k] (monomial maps over the other half) when dG/dy_i is linear in one half.

    ``linear_in`` is "x" or "y"; returns None if the equations are not linear there.
    """
    n = G.n
    lo = 0 if linear_in == "x" else n
    other = n if linear_in == "x" else 0
    M = [[[] for _ in range(n)] for _ in range(n)]
    for i, eq in enumerate(grads):
        for e, c in eq.items():
            part = e[lo : lo + n]
            if sum(part) != 1:
                return None
            k = part.index(1)
            M[i][k].append((e[other : other + n], c))
    return M


def _count_fibered(E, M, n: int, budget: int, chunk: int) -> int:
    Q = E.q
    total_pts = Q**n
    if total_pts > budget:
        raise BudgetExceeded(f"budget exceeded: {total_pts} fiber points (limit {budget})")
    total = 0
    for lo, hi in iter_chunks(total_pts, chunk):
        P = index_to_digits(Q, n, lo, hi)
        mats = np.zeros((P.shape[0], n, n), dtype=np.int64)
        for i in range(n):
            for k in range(n):
                if M[i][k]:
                    mats[:, i, k] = eval_monomials(E, M[i][k], P)
        ranks = batch_rank(E, mats)
        total += int(sum(Q ** (n - int(r)) for r in ranks))
    return total


def _count_direct(E, eqs, nv: int, budget: int, chunk: int) -> int:
    Q = E.q
    total_pts = Q**nv
    if total_pts > budget:
        raise BudgetExceeded(f"budget exceeded: {total_pts} points (limit {budget})")
    total = 0
    for lo, hi in iter_chunks(total_pts, chunk):
        P = index_to_digits(Q, nv, lo, hi)
        alive = np.ones(P.shape[0], dtype=bool)
        for eq in eqs:
            alive &= eval_monomials(E, eq, P) == 0
        total += int(alive.sum())
    return total


def _stable_dimension(q: int, counts):
    """Rounded growth exponents: log_q c_1, then log_q(c_m / c_(m-1))."""
    est = [round(math.log(counts[0], q))]
    for a, b in zip(counts, counts[1:]):
        est.append(round(math.log(b / a, q)))
    return est


def sigma_estimate(G: BidegreeForm, m_max: int = 3, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK) -> SigmaReport:
    """sigma_G, exactly when V* is cut out by linear equations, else from point counts."""
    case, ambient, offset, grads = locus_equations(G)
    n = G.n
    if case == "x,y":
        eqs = [list(g.items()) for g in grads]
        nv = 2 * n
    else:
        eqs = [_restrict(g, offset, n) for g in grads]
        nv = n
    if case != "x,y":
        M = _linear_matrix(eqs, nv)
        if M is not None:
            r = rank(G.field, M) if M else 0
            dim = nv - r
            return SigmaReport(case, ambient, [], [], dim, ambient - dim, "rank", False)
    base = G.field
    if not base.is_prime_field:
        raise NotImplementedError("point counts over extensions need a prime base field")
    budget = budget_from_env(1 << 24) if budget is None else budget
    fiber = None
    if case == "x,y":
        for side in ("x", "y"):
            Mf = _fiber_matrices(G, grads, side)
            if Mf is not None:
                fiber = Mf
                break
    counts, est = [], []
    for m in range(1, m_max + 1):
        E = GF(base.p, m)
        if fiber is not None:
            counts.append(_count_fibered(E, fiber, n, budget, chunk))
        else:
            counts.append(_count_direct(E, eqs, nv, budget, chunk))
        est = _stable_dimension(base.q, counts)
        if len(est) >= 2 and est[-1] == est[-2]:
            dim = est[-1]
            return SigmaReport(case, ambient, counts, est, dim, ambient - dim, "point-count", True)
    raise ArithmeticError(f"dimension estimate did not stabilize: estimates {est} from counts {counts}")
