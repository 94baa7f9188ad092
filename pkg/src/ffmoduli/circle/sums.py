"""The sum S(alpha) over the slot box and the exact grid form of the integral for N(e)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..characters import CycloSum
from ..counting import budget_from_env
from ..errors import BudgetExceeded, ContractViolation
from ..ff_core import BoxSpec, Field, LaurentNum, PrecisionError
from ..ff_core.box import DEFAULT_CHUNK
from ..forms import FormSystem, Hypersurface, tensor_from_form
from ._grid import cyclo_rows, grid_digits, psi_exps

__all__ = [
    "AlphaTuple",
    "eval_S",
    "S_on_grid",
    "exact_integral_N",
    "IntegralResult",
    "orthogonality_indicator",
]


class AlphaTuple:
    """(alpha_0, ..., alpha_de) with alpha_j known at least down to u^-(j+1)."""

    def __init__(self, components):
        comps = list(components)
        for j, a in enumerate(comps):
            if not isinstance(a, LaurentNum):
                raise TypeError("components must be LaurentNum")
            if not a.is_exact and a.floor > -(j + 1):
                raise PrecisionError(f"insufficient precision: alpha_{j} needs digits down to u^-{j + 1}")
        self.components = comps

    def __len__(self):
        return len(self.components)

    def __getitem__(self, j):
        return self.components[j]

    @property
    def field(self) -> Field:
        return self.components[0].field

    @classmethod
    def zero(cls, field: Field, num_forms: int) -> "AlphaTuple":
        return cls([LaurentNum.zero(field) for _ in range(num_forms)])

    @classmethod
    def from_digits(cls, field: Field, digit_rows) -> "AlphaTuple":
        """Component j gets digits (a_-1, ..., a_-(j+1)) and an exact zero tail."""
        comps = []
        for row in digit_rows:
            comps.append(LaurentNum(field, {-1 - i: int(c) for i, c in enumerate(row) if c}))
        return cls(comps)

    @classmethod
    def random(cls, field: Field, num_forms: int, rng, extra: int = 0) -> "AlphaTuple":
        """Random fractional parts; ``extra`` raises the precision below the required floor."""
        return cls(
            [LaurentNum.random(field, -1, -(j + 1) - extra, rng) for j in range(num_forms)]
        )

    def digits(self, j: int):
        return np.array([self.components[j].coefficient(-1 - i) for i in range(j + 1)], dtype=np.int64)

    def __repr__(self):
        return f"AlphaTuple({self.components!r})"


def _check_degrees(values, j):
    # deg F_j(t) <= j for slot degrees deg t_s <= s
    if values.shape[-1] != j + 1:
        raise ContractViolation(f"F_{j} exceeded the degree bound {j}")


def eval_S(system: FormSystem, alpha: AlphaTuple, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK) -> CycloSum:
    """Exact S(alpha) = sum over the slot box of psi(sum_k alpha_k F_k(t))."""
    F = system.field
    if len(alpha) != system.num_forms:
        raise ValueError(f"need {system.num_forms} components")
    box = BoxSpec(system.n, system.slot_bounds)
    size = box.cardinality(F.q)
    budget = budget_from_env() if budget is None else budget
    if size > budget:
        raise BudgetExceeded(f"budget exceeded: box of {size} tuples (limit {budget})")
    active = [j for j in range(system.num_forms) if alpha.digits(j).any()]
    mult = np.zeros(F.p, dtype=np.int64)
    for slots in box.chunks(F.q, chunk):
        exps = np.zeros(slots[0].shape[0], dtype=np.int64)
        for j in active:
            vals = system.F_batch(j, slots)
            _check_degrees(vals, j)
            exps += psi_exps(F, vals, alpha[j])
        mult += np.bincount(exps % F.p, minlength=F.p)
    return CycloSum(F.p, mult)


def _value_histogram(system: FormSystem, chunk: int):
    """Distinct joint values (F_0(t), ..., F_de(t)) over the box, with multiplicities."""
    F = system.field
    box = BoxSpec(system.n, system.slot_bounds)
    widths = [j + 1 for j in range(system.num_forms)]
    K = sum(widths)
    counts = {}
    for slots in box.chunks(F.q, chunk):
        vals = []
        for j in range(system.num_forms):
            v = system.F_batch(j, slots)
            _check_degrees(v, j)
            vals.append(v)
        joint = np.concatenate(vals, axis=1)
        uniq, cnt = np.unique(joint, axis=0, return_counts=True)
        for row, c in zip(uniq, cnt):
            key = tuple(int(x) for x in row)
            counts[key] = counts.get(key, 0) + int(c)
    V = np.array(list(counts.keys()), dtype=np.int64).reshape(-1, K)
    W = np.array(list(counts.values()), dtype=np.int64)
    return V, W, K


def _grid_exponents(F: Field, A, V):
    """tr(A_g . V_v) for all grid rows g and value rows v: shape (G, U)."""
    if F.k == 1:
        return (A @ V.T) % F.p
    return F.vtrace(F.vsum(F.vmul(A[:, None, :], V[None, :, :]), axis=-1))


def S_on_grid(system: FormSystem, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK):
    """S(alpha) at every grid alpha.

    Component j of alpha runs over the q^(j+1) fractional parts with digits at
    u^-1..u^-(j+1); that grid resolves psi(alpha_j F_j(t)) exactly because
    deg F_j(t) <= j.  Returns (grid digit rows (G, K), multiplicities (G, p)),
    where row g lists the digits of alpha_0, then alpha_1, and so on.
    """
    F = system.field
    budget = budget_from_env() if budget is None else budget
    box = BoxSpec(system.n, system.slot_bounds).cardinality(F.q)
    if box > budget:
        raise BudgetExceeded(f"budget exceeded: box of {box} tuples (limit {budget})")
    K = sum(j + 1 for j in range(system.num_forms))
    G = F.q**K
    if G > budget:
        raise BudgetExceeded(f"budget exceeded: alpha grid of {G} points (limit {budget})")
    V, W, _ = _value_histogram(system, chunk)
    if G * V.shape[0] > budget:
        raise BudgetExceeded(f"budget exceeded: {G * V.shape[0]} grid phase evaluations (limit {budget})")
    A = grid_digits(F.q, K)
    step = max(1, chunk // max(V.shape[0], 1))
    rows = []
    for lo in range(0, G, step):
        Ablk = A[lo : lo + step]
        rows.append(cyclo_rows(F.p, _grid_exponents(F, Ablk, V), W[None, :]))
    return A, np.concatenate(rows)


@dataclass(frozen=True)
class IntegralResult:
    N: int
    grid_points: int
    grid_sum: CycloSum
    weight: Fraction


def exact_integral_N(f: Hypersurface, e: int, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK, detail: bool = False):
    """N(e) as the normalised sum of S over the alpha grid."""
    system = FormSystem(tensor_from_form(f), e)
    A, mult = S_on_grid(system, budget, chunk)
    total = CycloSum(f.p, mult.sum(axis=0))
    ok, s = total.is_rational_integer()
    weight = Fraction(1, A.shape[0])
    value = weight * s if ok else None
    if not ok or value.denominator != 1:
        raise ContractViolation("internal error: orthogonality violated")
    N = int(value)
    if detail:
        return IntegralResult(N, A.shape[0], total, weight)
    return N


def orthogonality_indicator(system: FormSystem, slots, budget: Optional[int] = None):
    """Per-tuple product over j of q^-(j+1) sum_{alpha_j} psi(alpha_j F_j(t)).

    ``slots`` is a batch in the slot layout.  Returns an int array of 0/1
    values; raises if any factor is not 0 or 1.
    """
    F = system.field
    budget = budget_from_env() if budget is None else budget
    B = next(x.shape[0] for x in slots if x is not None)
    out = np.ones(B, dtype=np.int64)
    for j in range(system.num_forms):
        G = F.q ** (j + 1)
        if G * B > budget:
            raise BudgetExceeded(f"budget exceeded: {G * B} phase evaluations (limit {budget})")
        vals = system.F_batch(j, slots)
        _check_degrees(vals, j)
        grid = grid_digits(F.q, j + 1)
        exps = _grid_exponents(F, vals, grid)  # (B, G)
        mult = cyclo_rows(F.p, exps)
        for b in range(B):
            ok, s = CycloSum(F.p, mult[b]).is_rational_integer()
            if not ok or s not in (0, G):
                raise ContractViolation("internal error: orthogonality violated")
            if s == 0:
                out[b] = 0
    return out
