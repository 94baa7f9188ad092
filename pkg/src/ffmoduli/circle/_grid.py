"""Digit-level helpers: fractional digits of alpha * polynomial, alpha grids, small boxes."""
from __future__ import annotations

import numpy as np

from ..characters import CycloSum
from ..ff_core import Field, LaurentNum
from ..ff_core.box import index_to_digits

__all__ = [
    "digit_matrix",
    "frac_digits",
    "psi_exps",
    "grid_digits",
    "alpha_from_digits",
    "alpha_digits",
    "slot_enumeration",
    "cyclo_rows",
]


def digit_matrix(alpha: LaurentNum, L: int, K: int):
    """M[m, i] = a_{-1-i-m}: maps polynomial coefficients to fractional digits.

    For a polynomial v with coefficients v_0..v_{L-1}, (v @ M)[i] is the digit of
    alpha * v at u^{-1-i}, for i = 0..K-1.
    """
    M = np.zeros((L, K), dtype=np.int64)
    for m in range(L):
        for i in range(K):
            M[m, i] = alpha.coefficient(-1 - i - m)
    return M


def _apply(F: Field, V, M):
    if F.k == 1:
        return (V @ M) % F.p
    return F.vsum(F.vmul(V[..., :, None], M), axis=-2)


def frac_digits(F: Field, V, alpha: LaurentNum, K: int):
    """Digits of alpha * v at u^-1, ..., u^-K for a batch of polynomials V (..., L)."""
    V = np.asarray(V, dtype=np.int64)
    if K <= 0:
        return np.zeros(V.shape[:-1] + (0,), dtype=np.int64)
    return _apply(F, V, digit_matrix(alpha, V.shape[-1], K))


def psi_exps(F: Field, V, alpha: LaurentNum):
    """Exponents of psi(alpha * v) for a batch of polynomials V (..., L)."""
    return F.vtrace(frac_digits(F, V, alpha, 1)[..., 0])


def grid_digits(q: int, L: int, start: int = 0, stop=None):
    """All digit vectors (a_{-1}, ..., a_{-L}) as rows, in base-q order."""
    if stop is None:
        stop = q**L
    return index_to_digits(q, L, start, stop)


def alpha_from_digits(F: Field, digits, exact: bool = True) -> LaurentNum:
    """alpha = sum_i digits[i] u^{-1-i}; exact (zero tail) by default."""
    d = {-1 - i: int(c) for i, c in enumerate(digits) if c}
    return LaurentNum(F, d) if exact else LaurentNum(F, d, -len(digits))


def alpha_digits(alpha: LaurentNum, L: int):
    """(a_{-1}, ..., a_{-L})."""
    return np.array([alpha.coefficient(-1 - i) for i in range(L)], dtype=np.int64)


def slot_enumeration(q: int, n: int, bounds, start: int = 0, stop=None):
    """Enumerate tuples of polynomial vectors with |x_k| < q^bounds[k].

    A nonpositive bound admits only the zero vector (stored with one zero
    coefficient).  Returns (list of (B, n, L_k) arrays, total count).
    """
    widths = [max(b, 0) for b in bounds]
    total = q ** (n * sum(widths))
    if stop is None:
        stop = total
    flat = index_to_digits(q, n * sum(widths), start, stop)
    out, pos = [], 0
    B = flat.shape[0]
    for w in widths:
        if w == 0:
            out.append(np.zeros((B, n, 1), dtype=np.int64))
        else:
            out.append(flat[:, pos : pos + n * w].reshape(B, n, w))
            pos += n * w
    return out, total


def cyclo_rows(p: int, exps, weights=None):
    """Per-row multiplicity vectors (rows, p) from exponent rows, optionally weighted."""
    exps = np.asarray(exps, dtype=np.int64)
    R = exps.shape[0]
    flat = (np.arange(R)[:, None] * p + exps % p).ravel()
    if weights is None:
        counts = np.bincount(flat, minlength=R * p)
    else:
        w = np.broadcast_to(np.asarray(weights, dtype=np.int64), exps.shape).ravel()
        counts = np.zeros(R * p, dtype=np.int64)
        np.add.at(counts, flat, w)
    return counts.reshape(R, p)


def rows_to_cyclo(p: int, rows):
    return [CycloSum(p, r) for r in rows]
