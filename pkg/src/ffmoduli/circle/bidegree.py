"""Sums attached to a bidegree form: E(alpha), the N1/N2 counts, T_j and decoupling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .._batch import contract_all, is_zero_rows, with_poly_axis
from ..characters import CycloSum
from ..counting import budget_from_env
from ..errors import BudgetExceeded, ContractViolation
from ..ff_core import BoxSpec, LaurentNum
from ..ff_core.box import DEFAULT_CHUNK, iter_chunks
from ..forms import BidegreeForm, FormSystem, Hypersurface, build_G_j, split_index, tensor_from_form
from ._grid import cyclo_rows, frac_digits, grid_digits, psi_exps, slot_enumeration
from .sums import AlphaTuple, S_on_grid, _grid_exponents, eval_S

__all__ = [
    "ArcParams",
    "params_for",
    "gamma_degree",
    "eval_E",
    "E_on_grid",
    "n_counts",
    "n_count_inequality_check",
    "t_sum_bound_check",
    "t_sum_grid_check",
    "decouple_check",
    "decouple_grid_check",
    "REL_TOL",
]

REL_TOL = 1e-9


@dataclass(frozen=True)
class ArcParams:
    d1: int
    d2: int
    P1: int
    P2: int
    J: int = 1

    def __post_init__(self):
        if self.d1 < 0 or self.d2 < 1:
            raise ValueError("need d1 >= 0 and d2 >= 1")
        if not 1 <= self.P1 <= self.P2:
            raise ValueError("need 1 <= P1 <= P2")
        if self.d1 == 0 and self.P1 != self.P2:
            raise ValueError("P1 must equal P2 when d1 = 0")
        if self.J < 1:
            raise ValueError("J must be >= 1")

    @property
    def d(self) -> int:
        return self.d1 + self.d2

    @property
    def Q1(self) -> int:
        return self.J - self.P1

    @property
    def Q2(self) -> int:
        return self.J - self.P2

    def with_J(self, J: int) -> "ArcParams":
        return ArcParams(self.d1, self.d2, self.P1, self.P2, J)

    def to_dict(self):
        return {"d1": self.d1, "d2": self.d2, "P1": self.P1, "P2": self.P2, "J": self.J}


def params_for(G: BidegreeForm, J: int = 1) -> ArcParams:
    """Box exponents recorded on a piece G_j."""
    if G.P1 is None:
        raise ValueError("form carries no box exponents; pass ArcParams explicitly")
    return ArcParams(G.d1, G.d2, G.P1, G.P2, J)


def gamma_degree(params: ArcParams) -> int:
    """Largest possible u-degree of Gamma_G over the x/y box."""
    return params.d1 * (params.P1 - 1) + params.d2 * (params.P2 - 1)


def _check_shape(G: BidegreeForm, params: ArcParams):
    if (G.d1, G.d2) != (params.d1, params.d2):
        raise ValueError("form bidegree does not match the parameters")


def _box_bounds(params: ArcParams):
    return [params.P1] * params.d1 + [params.P2] * params.d2


def _enumerate(q, n, bounds, budget, chunk, what="box"):
    total = q ** (n * sum(max(b, 0) for b in bounds))
    if total > budget:
        raise BudgetExceeded(f"budget exceeded: {what} of {total} points (limit {budget})")
    for lo, hi in iter_chunks(total, chunk):
        yield slot_enumeration(q, n, bounds, lo, hi)[0]


def E_box_size(G: BidegreeForm, params: ArcParams) -> int:
    return G.field.q ** (G.n * (params.d1 * params.P1 + params.d2 * params.P2))


def eval_E(
    G: BidegreeForm,
    params: ArcParams,
    alpha: LaurentNum,
    budget: Optional[int] = None,
    chunk: int = DEFAULT_CHUNK,
    cross_check: bool = True,
) -> CycloSum:
    """Exact E(alpha) = sum over |x_i| < q^P1, |y_i| < q^P2 of psi(alpha Gamma_G(x; y)).

    With ``cross_check`` the value is compared against |Y| * N2^(0).
    """
    _check_shape(G, params)
    F = G.field
    budget = budget_from_env() if budget is None else budget
    mult = np.zeros(F.p, dtype=np.int64)
    for slots in _enumerate(F.q, G.n, _box_bounds(params), budget, chunk):
        vals = G.gamma_batch(slots[: G.d1], slots[G.d1 :])
        mult += np.bincount(psi_exps(F, vals, alpha) % F.p, minlength=F.p)
    E = CycloSum(F.p, mult)
    if cross_check:
        ok, val = E.is_rational_integer()
        n2 = n_counts(G, params, alpha, 0, "N2", budget=budget, chunk=chunk)
        if not ok or val != F.q ** (G.n * params.P2) * n2:
            raise ContractViolation(f"E(alpha) = {E} disagrees with |Y| N2 = {F.q ** (G.n * params.P2)} * {n2}")
    return E


def E_on_grid(G: BidegreeForm, params: ArcParams, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK):
    """E(alpha) for every alpha with digits at u^-1..u^-(D+1), D = max deg Gamma_G.

    These digits determine psi(alpha Gamma_G) on the box.  Returns
    (digit rows (q^(D+1), D+1), integer values).
    """
    _check_shape(G, params)
    F = G.field
    budget = budget_from_env() if budget is None else budget
    L = gamma_degree(params) + 1
    counts = {}
    for slots in _enumerate(F.q, G.n, _box_bounds(params), budget, chunk):
        vals = G.gamma_batch(slots[: G.d1], slots[G.d1 :])
        uniq, cnt = np.unique(vals, axis=0, return_counts=True)
        for row, c in zip(uniq, cnt):
            key = tuple(int(x) for x in row)
            counts[key] = counts.get(key, 0) + int(c)
    V = np.array(list(counts), dtype=np.int64).reshape(-1, L)
    W = np.array(list(counts.values()), dtype=np.int64)
    Gsz = F.q**L
    if Gsz * V.shape[0] > budget:
        raise BudgetExceeded(f"budget exceeded: {Gsz * V.shape[0]} grid phase evaluations (limit {budget})")
    A = grid_digits(F.q, L)
    mult = cyclo_rows(F.p, _grid_exponents(F, A, V), W[None, :])
    vals = []
    for row in mult:
        ok, v = CycloSum(F.p, row).is_rational_integer()
        if not ok or v < 0:
            raise ContractViolation("E(alpha) is not a nonnegative rational integer")
        vals.append(v)
    return A, np.array(vals, dtype=object)


def n_counts(
    G: BidegreeForm,
    params: ArcParams,
    alpha: LaurentNum,
    t: int,
    which: str,
    Q=None,
    budget: Optional[int] = None,
    chunk: int = DEFAULT_CHUNK,
) -> int:
    """Exact N2^(t)(Q2; alpha) or N1^(t)(Q; alpha).

    N2^(t): x in the P1 box, y'_1..y'_t with |y| < q^(Q2+P2), the remaining
    y' in the P2 box, and ||alpha Gamma_G(x; y', e_i)|| < q^(t Q2 - P2) for all i.
    N1^(t): x_1..x_t with |x| < q^(Q1+P1), the remaining x in the P1 box, all
    y' with |y| < q^(Q2+P2), and the norm below q^(t Q1 + (d2-1) Q2 - P2).
    """
    _check_shape(G, params)
    F = G.field
    Q1, Q2 = (params.Q1, params.Q2) if Q is None else Q
    d1, d2, P1, P2 = params.d1, params.d2, params.P1, params.P2
    if which == "N2":
        if not 0 <= t <= d2 - 1:
            raise ValueError("N2 needs 0 <= t <= d2 - 1")
        bounds = [P1] * d1 + [Q2 + P2] * t + [P2] * (d2 - 1 - t)
        c = t * Q2 - P2
    elif which == "N1":
        if not 0 <= t <= d1:
            raise ValueError("N1 needs 0 <= t <= d1")
        bounds = [Q1 + P1] * t + [P1] * (d1 - t) + [Q2 + P2] * (d2 - 1)
        c = t * Q1 + (d2 - 1) * Q2 - P2
    else:
        raise ValueError("which must be 'N1' or 'N2'")
    budget = budget_from_env() if budget is None else budget
    # free index first, so the d - 1 slots contract indices 1..d-1
    T = with_poly_axis(np.moveaxis(np.asarray(G.coeffs), -1, 0))
    total = 0
    for slots in _enumerate(F.q, G.n, bounds, budget, chunk, "counting box"):
        if slots:
            vals = contract_all(F, T, slots)  # (B, n, L)
        else:
            vals = T[None]
        if c >= 0:
            total += vals.shape[0]
            continue
        digs = frac_digits(F, vals, alpha, -c)
        total += int(is_zero_rows(digs).sum())
    return total


def n_count_inequality_check(G: BidegreeForm, params: ArcParams, alpha: LaurentNum, Q=None, budget=None):
    """N2^(0) <= q^(-d1 Q1 n - (d2-1) Q2 n) N1^(d1), both sides enumerated."""
    Q1, Q2 = (params.Q1, params.Q2) if Q is None else Q
    if Q1 > 0 or Q2 > 0:
        raise ValueError("need Q1, Q2 <= 0")
    q, n = G.field.q, G.n
    lhs = n_counts(G, params, alpha, 0, "N2", (Q1, Q2), budget)
    n1 = n_counts(G, params, alpha, params.d1, "N1", (Q1, Q2), budget)
    rhs = q ** (-params.d1 * Q1 * n - (params.d2 - 1) * Q2 * n) * n1
    return {"lhs": lhs, "rhs": rhs, "N1": n1, "pass": lhs <= rhs}


def _log_le(log_lhs: float, log_rhs: float) -> bool:
    return log_lhs <= log_rhs + math.log1p(REL_TOL)


def _slot_set(d: int, j: int):
    ell, r = split_index(d, j)
    return (ell - 1, ell) if r < d else (ell,)


def _T_value(system: FormSystem, alpha: AlphaTuple, j: int, outer, chunk: int):
    """T_j: the sum over the slots in I_j of psi(sum_k alpha_k F_k), other slots fixed."""
    F = system.field
    I = _slot_set(system.d, j)
    inner = BoxSpec(system.n, [s + 1 for s in I])
    mult = np.zeros(F.p, dtype=np.int64)
    active = [k for k in range(system.num_forms) if alpha.digits(k).any()]
    for blk in inner.chunks(F.q, chunk):
        B = blk[0].shape[0]
        slots = []
        for s in range(system.e + 1):
            if s in I:
                slots.append(blk[I.index(s)])
            else:
                slots.append(np.broadcast_to(outer[s][None], (B,) + outer[s].shape))
        exps = np.zeros(B, dtype=np.int64)
        for k in active:
            exps += psi_exps(F, system.F_batch(k, slots), alpha[k])
        mult += np.bincount(exps % F.p, minlength=F.p)
    return CycloSum(F.p, mult), inner.cardinality(F.q)


def _random_outer(system: FormSystem, j: int, rng):
    I = _slot_set(system.d, j)
    q = system.field.q
    return {
        s: rng.integers(q, size=(system.n, s + 1)).astype(np.int64)
        for s in range(system.e + 1)
        if s not in I
    }


def t_sum_bound_check(f: Hypersurface, e: int, j: int, alpha: AlphaTuple, outer=None, rng=None, chunk=DEFAULT_CHUNK, budget=None):
    """|T_j|^(2^(d-1)) <= |U_j|^(2^(d-1)) E_j(0)^-1 |E_j(alpha_j)|.

    ``outer`` maps each slot index outside I_j to an (n, s+1) coefficient array;
    by default these are drawn from ``rng``.
    """
    tensor = tensor_from_form(f)
    system = FormSystem(tensor, e)
    G = build_G_j(tensor, e, j)
    params = params_for(G)
    if outer is None:
        outer = _random_outer(system, j, rng if rng is not None else np.random.default_rng(0))
    T, U = _T_value(system, alpha, j, outer, chunk)
    E = eval_E(G, params, alpha[j], budget=budget, chunk=chunk).as_int()
    E0 = E_box_size(G, params)
    w = 2 ** (system.d - 1)
    return _T_report(T, U, E, E0, w)


def _T_report(T: CycloSum, U: int, E: int, E0: int, w: int):
    lhs = T.magnitude() ** w
    if E == 0:
        ok = T.is_zero()
        rhs = 0.0
    else:
        rhs_log = w * math.log(U) - math.log(E0) + math.log(E)
        rhs = math.exp(rhs_log)
        ok = T.is_zero() or _log_le(w * math.log(T.magnitude()), rhs_log)
    return {"lhs": lhs, "rhs": rhs, "pass": bool(ok)}


def t_sum_grid_check(f: Hypersurface, e: int, j: int, outer=None, rng=None, budget=None, chunk=DEFAULT_CHUNK):
    """The T_j bound at every grid alpha; returns (points checked, failures, worst lhs/rhs)."""
    tensor = tensor_from_form(f)
    system = FormSystem(tensor, e)
    G = build_G_j(tensor, e, j)
    params = params_for(G)
    if outer is None:
        outer = _random_outer(system, j, rng if rng is not None else np.random.default_rng(0))
    F = f.field
    budget = budget_from_env() if budget is None else budget
    I = _slot_set(system.d, j)
    inner = BoxSpec(system.n, [s + 1 for s in I])
    # joint values of all F_k over U_j with the outer slots fixed
    counts = {}
    for blk in inner.chunks(F.q, chunk):
        B = blk[0].shape[0]
        slots = [
            blk[I.index(s)] if s in I else np.broadcast_to(outer[s][None], (B,) + outer[s].shape)
            for s in range(system.e + 1)
        ]
        joint = np.concatenate([system.F_batch(k, slots) for k in range(system.num_forms)], axis=1)
        uniq, cnt = np.unique(joint, axis=0, return_counts=True)
        for row, c in zip(uniq, cnt):
            key = tuple(int(x) for x in row)
            counts[key] = counts.get(key, 0) + int(c)
    K = joint.shape[1]
    V = np.array(list(counts), dtype=np.int64).reshape(-1, K)
    W = np.array(list(counts.values()), dtype=np.int64)
    Gsz = F.q**K
    if Gsz * V.shape[0] > budget:
        raise BudgetExceeded(f"budget exceeded: {Gsz * V.shape[0]} grid phase evaluations (limit {budget})")
    A = grid_digits(F.q, K)
    Tmult = cyclo_rows(F.p, _grid_exponents(F, A, V), W[None, :])
    Ea, Ev = E_on_grid(G, params, budget, chunk)
    off = sum(k + 1 for k in range(j))
    E0 = E_box_size(G, params)
    U = inner.cardinality(F.q)
    w = 2 ** (system.d - 1)
    fails, worst = 0, 0.0
    for g in range(A.shape[0]):
        aj = A[g, off : off + j + 1]
        E = int(Ev[_digits_index(aj, F.q)])
        rep = _T_report(CycloSum(F.p, Tmult[g]), U, E, E0, w)
        if not rep["pass"]:
            fails += 1
        if rep["rhs"] > 0:
            worst = max(worst, rep["lhs"] / rep["rhs"])
    return {"points": A.shape[0], "failures": fails, "max_ratio": worst, "pass": fails == 0}


def _digits_index(digits, q: int) -> int:
    """Row index of a digit vector in grid_digits order."""
    idx = 0
    for c in digits:
        idx = idx * q + int(c)
    return idx


def _decouple_sides(S: CycloSum, Us: int, E_vals, E0s, w: int, m: int):
    """log-space comparison of |S|^w with the product bound."""
    lhs = S.magnitude() ** w
    if any(E == 0 for E in E_vals):
        return {"lhs": lhs, "rhs": 0.0, "pass": bool(S.is_zero())}
    log_rhs = w * math.log(Us) + sum(math.log(E) - math.log(E0) for E, E0 in zip(E_vals, E0s)) / m
    ok = S.is_zero() or _log_le(w * math.log(S.magnitude()), log_rhs)
    return {"lhs": lhs, "rhs": math.exp(log_rhs), "pass": bool(ok)}


def decouple_check(f: Hypersurface, e: int, alpha: AlphaTuple, budget=None, chunk=DEFAULT_CHUNK, detail=False):
    """|S(alpha)|^(2^(d-1)) <= frakE^(2^(d-1)) |U|^(2^(d-1)) prod_j |E_j(alpha_j)|^(1/(de+1))."""
    tensor = tensor_from_form(f)
    system = FormSystem(tensor, e)
    S = eval_S(system, alpha, budget, chunk)
    Es, E0s = [], []
    for j in range(system.num_forms):
        G = build_G_j(tensor, e, j)
        params = params_for(G)
        Es.append(eval_E(G, params, alpha[j], budget=budget, chunk=chunk).as_int())
        E0s.append(E_box_size(G, params))
    Us = BoxSpec(system.n, system.slot_bounds).cardinality(f.q)
    rep = _decouple_sides(S, Us, Es, E0s, 2 ** (system.d - 1), system.num_forms)
    return rep if detail else rep["pass"]


def decouple_grid_check(f: Hypersurface, e: int, budget=None, chunk=DEFAULT_CHUNK):
    """The decoupling inequality at every alpha on the exact grid."""
    tensor = tensor_from_form(f)
    system = FormSystem(tensor, e)
    A, mult = S_on_grid(system, budget, chunk)
    tables, E0s = [], []
    for j in range(system.num_forms):
        G = build_G_j(tensor, e, j)
        params = params_for(G)
        tables.append(E_on_grid(G, params, budget, chunk)[1])
        E0s.append(E_box_size(G, params))
    Us = BoxSpec(system.n, system.slot_bounds).cardinality(f.q)
    w, m, q = 2 ** (system.d - 1), system.num_forms, f.q
    fails, worst = 0, 0.0
    for g in range(A.shape[0]):
        Es, off = [], 0
        for j in range(m):
            Es.append(int(tables[j][_digits_index(A[g, off : off + j + 1], q)]))
            off += j + 1
        rep = _decouple_sides(CycloSum(f.p, mult[g]), Us, Es, E0s, w, m)
        if not rep["pass"]:
            fails += 1
        if rep["rhs"] > 0:
            worst = max(worst, rep["lhs"] / rep["rhs"])
    return {"points": A.shape[0], "failures": fails, "max_ratio": worst, "pass": fails == 0}
