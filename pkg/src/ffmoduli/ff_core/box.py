"""Degree boxes {t in F_q[u]^n : |t_s| < q^bound_s} and their vectorised enumeration.

A polynomial vector with |t| < q^L is stored as an int array of shape (n, L):
entry [i, k] is the coefficient of u^k in the i-th coordinate.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["BoxSpec", "box_cardinality", "index_to_digits", "iter_chunks", "DEFAULT_CHUNK"]

DEFAULT_CHUNK = 1 << 16


def box_cardinality(q: int, n: int, bound: int) -> int:
    """#{x in F_q[u]^n : |x| < q^bound}; a nonpositive bound leaves only 0."""
    return q ** (n * max(bound, 0))


@dataclass(frozen=True)
class BoxSpec:
    n: int
    bounds: tuple

    def __post_init__(self):
        if any(b <= 0 for b in self.bounds):
            raise ValueError("box bounds must be positive")

    @property
    def digits(self) -> int:
        return self.n * sum(self.bounds)

    def cardinality(self, q: int) -> int:
        return q**self.digits

    def split(self, flat):
        """Split a (B, digits) array into per-slot arrays of shape (B, n, bound)."""
        out, pos = [], 0
        for b in self.bounds:
            w = self.n * b
            out.append(flat[:, pos : pos + w].reshape(-1, self.n, b))
            pos += w
        return out

    def enumerate(self, q: int, start: int = 0, stop=None):
        """Slot arrays for the box elements with flat indices in [start, stop)."""
        if stop is None:
            stop = self.cardinality(q)
        return self.split(index_to_digits(q, self.digits, start, stop))

    def chunks(self, q: int, chunk: int = DEFAULT_CHUNK):
        for lo, hi in iter_chunks(self.cardinality(q), chunk):
            yield self.enumerate(q, lo, hi)


def index_to_digits(q: int, ndigits: int, start: int, stop: int):
    """Base-q digits (least significant last) of the integers in [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((idx.size, ndigits), dtype=np.int64)
    for pos in range(ndigits - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


def iter_chunks(total: int, chunk: int):
    lo = 0
    while lo < total:
        hi = min(total, lo + chunk)
        yield lo, hi
        lo = hi
