"""Small dense linear algebra over F_q on int-encoded matrices."""
from __future__ import annotations

import itertools

import numpy as np

from .field import Field

__all__ = ["row_reduce", "rank", "nullspace", "batch_rank"]


def row_reduce(F: Field, M):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    A = [list(map(int, row)) for row in M]
    if not A:
        return A, []
    m, n = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(m):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A, pivots


def rank(F: Field, M) -> int:
    return len(row_reduce(F, M)[1])


def nullspace(F: Field, M, ncols=None):
    """Basis (list of vectors) of {x : M x = 0}."""
    if len(M) == 0:
        n = ncols
        return [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    R, pivots = row_reduce(F, M)
    n = len(R[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [0] * n
        v[fcol] = 1
        for row, pc in zip(R, pivots):
            v[pc] = F.neg(row[fcol])
        basis.append(v)
    return basis


def _det_batch(F: Field, M):
    """Leibniz determinant of a batch of k x k matrices, shape (B, k, k)."""
    k = M.shape[-1]
    out = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = np.ones(M.shape[:-2], dtype=np.int64)
        for i, j in enumerate(perm):
            term = F.vmul(term, M[..., i, j])
        out = F.vsub(out, term) if inversions % 2 else F.vadd(out, term)
    return out


def batch_rank(F: Field, M):
    """Ranks of a batch of small matrices (B, m, n) via vanishing of minors."""
    M = np.asarray(M, dtype=np.int64)
    B = M.shape[0]
    m, n = M.shape[1], M.shape[2]
    ranks = np.zeros(B, dtype=np.int64)
    for r in range(1, min(m, n) + 1):
        found = np.zeros(B, dtype=bool)
        for rows in itertools.combinations(range(m), r):
            for cols in itertools.combinations(range(n), r):
                sub = M[:, list(rows)][:, :, list(cols)]
                found |= _det_batch(F, sub) != 0
        ranks[found] = r
        if not found.any():
            break
    return ranks
