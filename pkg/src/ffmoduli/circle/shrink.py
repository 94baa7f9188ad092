"""Lattice-point counts under symmetric linear forms and the shrinking inequality."""
from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from ..counting import budget_from_env
from ..errors import BudgetExceeded, ParameterError
from ..ff_core import LaurentNum
from ..ff_core.box import DEFAULT_CHUNK, index_to_digits, iter_chunks
from ._grid import frac_digits

__all__ = ["shrink_count", "shrink_check", "random_symmetric_forms", "zero_forms"]


def _validate(gammas):
    N = len(gammas)
    if N == 0 or any(len(row) != N for row in gammas):
        raise ParameterError("parameter contract violated: need an N x N coefficient matrix")
    for i in range(N):
        for j in range(i + 1, N):
            if not gammas[i][j].equals_to_precision(gammas[j][i]):
                raise ParameterError("parameter contract violated: forms are not symmetric")
    return N, gammas[0][0].field


def shrink_count(gammas, box_exp: int, norm_exp: int, budget: Optional[int] = None, chunk: int = DEFAULT_CHUNK) -> int:
    """#{t in F_q[u]^N : |t_i| < q^box_exp, ||L_i(t)|| < q^norm_exp for all i}."""
    N, F = _validate(gammas)
    q = F.q
    w = max(box_exp, 0)
    total_pts = q ** (N * w)
    budget = budget_from_env() if budget is None else budget
    if total_pts > budget:
        raise BudgetExceeded(f"budget exceeded: box of {total_pts} points (limit {budget})")
    if w == 0:
        return 1  # only t = 0, where every form vanishes
    K = -norm_exp
    if K <= 0:
        return total_pts
    count = 0
    for lo, hi in iter_chunks(total_pts, chunk):
        T = index_to_digits(q, N * w, lo, hi).reshape(-1, N, w)
        alive = np.ones(T.shape[0], dtype=bool)
        for i in range(N):
            acc = np.zeros((T.shape[0], K), dtype=np.int64)
            for j in range(N):
                acc = F.vadd(acc, frac_digits(F, T[:, j, :], gammas[i][j], K))
            alive &= ~acc.any(axis=1)
        count += int(alive.sum())
    return count


def _as_int(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ParameterError(f"parameter contract violated: {what} must be an integer")
    return int(x)


def shrink_check(gammas, A, Z1, Z2, budget: Optional[int] = None):
    """N_A(Z2) <= q^(N (Z2 - Z1)) N_A(Z1), with both counts enumerated.

    Side conditions: A >= 0, Z1, Z2 <= 0, A - Z2 a positive integer,
    Z2 - Z1 a nonnegative integer, and A +- Z_i integers.
    """
    A, Z1, Z2 = Fraction(A), Fraction(Z1), Fraction(Z2)
    if A < 0 or Z1 > 0 or Z2 > 0:
        raise ParameterError("parameter contract violated: need A >= 0 and Z1, Z2 <= 0")
    if _as_int(A - Z2, "A - Z2") < 1:
        raise ParameterError("parameter contract violated: A - Z2 must be a positive integer")
    if _as_int(Z2 - Z1, "Z2 - Z1") < 0:
        raise ParameterError("parameter contract violated: Z2 - Z1 must be nonnegative")
    for Z in (Z1, Z2):
        _as_int(A + Z, "A + Z")
        _as_int(A - Z, "A - Z")
    N, F = _validate(gammas)
    n1 = shrink_count(gammas, int(A + Z1), int(-A + Z1), budget)
    n2 = shrink_count(gammas, int(A + Z2), int(-A + Z2), budget)
    rhs = F.q ** (N * int(Z2 - Z1)) * n1
    return {"N_Z1": n1, "N_Z2": n2, "lhs": n2, "rhs": rhs, "pass": n2 <= rhs}


def random_symmetric_forms(field, N: int, floor: int, rng, top: int = -1):
    """Symmetric N x N matrix of random Laurent coefficients with digits top..floor."""
    g = [[None] * N for _ in range(N)]
    for i in range(N):
        for j in range(i, N):
            g[i][j] = g[j][i] = LaurentNum.random(field, top, floor, rng)
    return g


def zero_forms(field, N: int):
    z = LaurentNum.zero(field)
    return [[z] * N for _ in range(N)]
