"""Vectorised evaluation kernels shared by forms, counting and circle.

Batches of polynomial vectors are int arrays of shape (B, n, L) where entry
[b, i, k] is the u^k coefficient of coordinate i.  Multilinear forms are dense
coefficient tensors of shape (n,)*d.  Contraction multiplies polynomials, so each
step is a convolution along the last axis.
"""
from __future__ import annotations

import numpy as np

from .ff_core import Field

__all__ = ["contract_last", "contract_all", "with_poly_axis", "eval_monomials", "vpow", "is_zero_rows", "poly_rows"]


def contract_last(F: Field, T, x, batched: bool):
    """Contract the last tensor index of T with a batch of polynomial vectors.

    T has shape (..., n, L) (with a leading batch axis when ``batched``), x has
    shape (B, n, Lx).  Returns (B, ..., L + Lx - 1).
    """
    L = T.shape[-1]
    B, n, Lx = x.shape
    mid = T.shape[1:-2] if batched else T.shape[:-2]
    out = np.zeros((B,) + mid + (L + Lx - 1,), dtype=np.int64)
    if F.k == 1:
        spec = "B...ia,Bi->B...a" if batched else "...ia,Bi->B...a"
        for b in range(Lx):
            out[..., b : b + L] += np.einsum(spec, T, x[:, :, b])
        return out % F.p
    Tb = T if batched else T[None]
    for b in range(Lx):
        xb = x[:, :, b].reshape((B,) + (1,) * len(mid) + (n, 1))
        s = F.vsum(F.vmul(Tb, xb), axis=-2)
        out[..., b : b + L] = F.vadd(out[..., b : b + L], s)
    return out


def contract_all(F: Field, T, slots, batched: bool = False):
    """Full contraction of a (..., L) tensor with one batch vector per index.

    ``slots[k]`` contracts tensor index k.  An unbatched T carries a trailing
    length-1 polynomial axis if it came from a plain coefficient tensor.
    Returns (B, Ltotal).
    """
    for x in reversed(slots):
        T = contract_last(F, T, x, batched)
        batched = True
    return T


def with_poly_axis(C):
    """Append the trailing polynomial axis (constants) to a coefficient tensor."""
    return np.asarray(C, dtype=np.int64)[..., None]


def vpow(F: Field, a, e: int):
    out = np.ones_like(a)
    base = a
    while e:
        if e & 1:
            out = F.vmul(out, base)
        base = F.vmul(base, base)
        e >>= 1
    return out


def eval_monomials(F: Field, terms, X):
    """Evaluate sum c * prod x_i^e_i at points X of shape (B, n) over F.

    ``terms`` is an iterable of (exps, c) with c already in F's encoding.
    """
    X = np.asarray(X, dtype=np.int64)
    total = np.zeros(X.shape[0], dtype=np.int64)
    for exps, c in terms:
        if not c:
            continue
        term = np.full(X.shape[0], c, dtype=np.int64)
        for i, e in enumerate(exps):
            if e:
                term = F.vmul(term, vpow(F, X[:, i], e))
        total = F.vadd(total, term)
    return total


def is_zero_rows(A):
    """Rows of a (B, ...) array that vanish identically."""
    return ~A.reshape(A.shape[0], -1).any(axis=1)


def poly_rows(polys, L: int):
    """Pack a sequence of Poly (or ints) into a coefficient array of length L."""
    out = np.zeros((len(polys), L), dtype=np.int64)
    for i, a in enumerate(polys):
        coeffs = getattr(a, "coeffs", None)
        if coeffs is None:
            coeffs = (int(a),)
        if len(coeffs) > L:
            raise ValueError("polynomial exceeds the slot degree bound")
        out[i, : len(coeffs)] = coeffs
    return out
