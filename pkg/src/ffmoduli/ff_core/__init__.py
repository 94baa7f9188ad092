"""Exact arithmetic for F_q, F_q[u] and truncated F_q((1/u))."""
from .box import BoxSpec, box_cardinality
from .field import GF, NEG_INF, Field, FqElem, PrecisionError, find_irreducible, is_irreducible, is_prime
from .laurent import LaurentNum, poly_quotient_expand
from .linalg import batch_rank, nullspace, rank, row_reduce
from .mpoly import MPoly
from .poly import Poly, poly_gcd, poly_xgcd

__all__ = [
    "GF",
    "NEG_INF",
    "Field",
    "FqElem",
    "PrecisionError",
    "find_irreducible",
    "is_irreducible",
    "is_prime",
    "Poly",
    "poly_gcd",
    "poly_xgcd",
    "LaurentNum",
    "poly_quotient_expand",
    "MPoly",
    "BoxSpec",
    "box_cardinality",
    "row_reduce",
    "rank",
    "nullspace",
    "batch_rank",
]
