"""Expected dimensions and the exact count N(e) of slot tuples with all F_j = 0."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ._batch import contract_all, is_zero_rows
from .errors import BudgetExceeded
from .ff_core import BoxSpec
from .ff_core.box import DEFAULT_CHUNK, index_to_digits, iter_chunks
from .forms import FormSystem, Hypersurface, tensor_from_form

__all__ = [
    "ExpectedDims",
    "expected_dims",
    "CountResult",
    "count_N",
    "ratio_report",
    "STRATEGIES",
    "DEFAULT_BUDGET",
    "budget_from_env",
]

DEFAULT_BUDGET = 1 << 34
STRATEGIES = ("naive", "root-first", "linear-solve")


def budget_from_env(default: int = DEFAULT_BUDGET) -> int:
    """The FFMODULI_BUDGET_OVERRIDE cap if set, else ``default``."""
    raw = os.environ.get("FFMODULI_BUDGET_OVERRIDE")
    return int(raw) if raw else default


@dataclass(frozen=True)
class ExpectedDims:
    n: int
    d: int
    e: int
    mu: int
    muhat: int
    fano_excess: Optional[int] = None

    def to_dict(self):
        return dict(self.__dict__)


def expected_dims(n: int, d: int, e: int) -> ExpectedDims:
    if n < 1 or d < 2 or e < 1:
        raise ValueError("need n >= 1, d >= 2, e >= 1")
    mu = n * math.comb(e + 2, 2) - math.comb(d * e + 2, 2) - 1
    fano = mu - 8 if e == 1 else None
    if fano is not None:
        assert fano == 3 * n - math.comb(d + 2, 2) - 9
    return ExpectedDims(n, d, e, mu, mu + 1, fano)


@dataclass(frozen=True)
class CountResult:
    q: int
    e: int
    N: int
    box_size: int
    muhat: int
    ratio: Fraction
    strategy: str
    evaluations: int
    roots: Optional[int] = None

    @property
    def ratio_float(self) -> float:
        return float(self.ratio)

    def to_dict(self):
        out = {
            "q": self.q,
            "e": self.e,
            "N": str(self.N),
            "box_size": str(self.box_size),
            "muhat": self.muhat,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_float": self.ratio_float,
            "strategy": self.strategy,
            "evaluations": str(self.evaluations),
        }
        if self.roots is not None:
            out["roots"] = str(self.roots)
        return out


def _form_order(system: FormSystem, first=()):
    """F_j order for staged filtering: top form, then increasing j."""
    top = system.num_forms - 1
    rest = [j for j in range(system.num_forms) if j not in first and j != top]
    return list(first) + ([top] if top not in first else []) + rest


def _count_naive(system: FormSystem, budget: int, chunk: int):
    box = BoxSpec(system.n, system.slot_bounds)
    q = system.field.q
    size = box.cardinality(q)
    if size > budget:
        raise BudgetExceeded(f"budget exceeded: box of {size} tuples (limit {budget})")
    order = _form_order(system, first=(0,))
    total = 0
    for slots in box.chunks(q, chunk):
        for j in order:
            if not slots[0].shape[0]:
                break
            keep = is_zero_rows(system.F_batch(j, slots))
            slots = [s[keep] for s in slots]
        total += slots[0].shape[0]
    return total, size, None


def _roots(f: Hypersurface, chunk: int):
    q, n = f.q, f.n
    out = []
    for lo, hi in iter_chunks(q**n, chunk):
        pts = index_to_digits(q, n, lo, hi)
        out.append(pts[f.eval_batch(pts) == 0])
    return np.concatenate(out)


def _count_root(system: FormSystem, t0, chunk: int):
    inner = BoxSpec(system.n, system.slot_bounds[1:])
    q = system.field.q
    cache = system.root_cache(t0)
    order = [j for j in _form_order(system) if j != 0]
    total = 0
    for inner_slots in inner.chunks(q, chunk):
        slots = [None] + inner_slots
        for j in order:
            if not slots[1].shape[0]:
                break
            keep = is_zero_rows(system.F_batch_cached(j, slots, cache))
            slots = [None] + [s[keep] for s in slots[1:]]
        total += slots[1].shape[0]
    return total


def _run_roots(fn, roots, threads: int):
    if threads <= 1 or len(roots) <= 1:
        return sum(fn(t0) for t0 in roots)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(fn, roots))


def _count_root_first(system, f, budget, chunk, threads):
    q, n = f.q, f.n
    if q**n > budget:
        raise BudgetExceeded(f"budget exceeded: {q ** n} candidate roots (limit {budget})")
    roots = _roots(f, chunk)
    inner = BoxSpec(n, system.slot_bounds[1:]).cardinality(q)
    work = q**n + len(roots) * inner
    if work > budget:
        raise BudgetExceeded(f"budget exceeded: {work} evaluations (limit {budget})")
    N = _run_roots(lambda t0: _count_root(system, t0, chunk), roots, threads)
    return N, work, len(roots)


class _LinearSolver:
    """Per-root solver for d = 2.

    For 1 <= s <= e, F_s = 2 Gamma(t_0, t_s) + R_s where R_s involves only
    t_1..t_{s-1}.  With t_0 constant, v = C t_0 is a constant vector and the
    u^k coefficient of F_s = 0 is the affine equation 2 v . t_s[:, k] = -R_s[k].
    When v != 0 the pivot coordinate is solved for; when v = 0 the rows with
    R_s != 0 are dropped and t_s is free.  The remaining F_(e+1)..F_(2e) only
    involve t_1..t_e and are filtered at the end.
    """

    def __init__(self, system: FormSystem, t0, chunk: int):
        self.S = system
        self.F = system.field
        self.n = system.n
        self.e = system.e
        self.chunk = chunk
        F = self.F
        self.v = system.root_cache(t0)[1][:, 0]
        nz = np.flatnonzero(self.v)
        self.pivot = int(nz[0]) if nz.size else None
        if self.pivot is not None:
            self.neg_half_over_v = F.div(F.neg(F.inv(F.from_int(2))), int(self.v[self.pivot]))
            self.coef_over_v = [F.neg(F.div(int(self.v[i]), int(self.v[self.pivot]))) for i in range(self.n)]
        # terms of F_s not touching slot 0
        self.rest_terms = {
            s: [(ms, w) for ms, w in system.terms[s] if 0 not in ms] for s in range(1, self.e + 1)
        }

    def _R(self, s, slots, B):
        F = self.F
        out = np.zeros((B, s + 1), dtype=np.int64)
        for ms, w in self.rest_terms[s]:
            if w:
                val = contract_all(F, self.S.C, [slots[k] for k in ms])
                out = F.vadd(out, F.vscale(w, val))
        return out

    def _expand(self, s, slots, B):
        """All completions of the frontier rows by a solution t_s; yields slot lists."""
        F, n, q = self.F, self.n, self.F.q
        R = self._R(s, slots, B) if s >= 2 else np.zeros((B, s + 1), dtype=np.int64)
        if self.pivot is None:
            keep = is_zero_rows(R)
            slots = [None] + [x[keep] for x in slots[1:]]
            B = int(keep.sum())
            if not B:
                return
            free_coords = n * (s + 1)
        else:
            free_coords = (n - 1) * (s + 1)
        Q = q**free_coords
        step = max(1, self.chunk // max(Q, 1))
        for lo in range(0, B, step):
            hi = min(B, lo + step)
            b = hi - lo
            for qlo, qhi in iter_chunks(Q, max(self.chunk, 1)):
                free = index_to_digits(q, free_coords, qlo, qhi)
                m = free.shape[0]
                rows = np.repeat(np.arange(lo, hi), m)
                if self.pivot is None:
                    ts = np.tile(free, (b, 1)).reshape(b * m, n, s + 1)
                else:
                    others = np.tile(free, (b, 1)).reshape(b * m, n - 1, s + 1)
                    ts = np.zeros((b * m, n, s + 1), dtype=np.int64)
                    idx = [i for i in range(n) if i != self.pivot]
                    ts[:, idx, :] = others
                    # t_s[pivot, k] = (-R[k]/2 - sum_{i != pivot} v_i t_s[i, k]) / v_pivot
                    acc = F.vscale(self.neg_half_over_v, R[rows])
                    for i in idx:
                        acc = F.vadd(acc, F.vscale(self.coef_over_v[i], ts[:, i, :]))
                    ts[:, self.pivot, :] = acc
                yield [None] + [x[rows] for x in slots[1:]] + [ts], b * m

    def count(self):
        return self._rec(1, [None], 1)

    def _rec(self, s, slots, B):
        if s > self.e:
            for j in range(self.e + 1, 2 * self.e + 1):
                if not B:
                    return 0
                keep = is_zero_rows(self.S.F_batch(j, slots))
                slots = [None] + [x[keep] for x in slots[1:]]
                B = int(keep.sum())
            return B
        total = 0
        for new_slots, nb in self._expand(s, slots, B):
            total += self._rec(s + 1, new_slots, nb)
        return total

    def work(self):
        q, n = self.F.q, self.n
        per = n if self.pivot is None else n - 1
        return q ** (per * sum(s + 1 for s in range(1, self.e + 1)))


def _count_linear(system, f, budget, chunk, threads):
    if f.d != 2:
        raise ValueError("the linear-solve strategy needs d = 2")
    q, n = f.q, f.n
    if q**n > budget:
        raise BudgetExceeded(f"budget exceeded: {q ** n} candidate roots (limit {budget})")
    roots = _roots(f, chunk)
    solvers = [_LinearSolver(system, t0, chunk) for t0 in roots]
    work = q**n + sum(s.work() for s in solvers)
    if work > budget:
        raise BudgetExceeded(f"budget exceeded: {work} evaluations (limit {budget})")
    N = _run_roots(lambda s: s.count(), solvers, threads)
    return N, work, len(roots)


def count_N(
    f: Hypersurface,
    e: int,
    strategy: str = "root-first",
    threads: int = 1,
    budget: Optional[int] = None,
    chunk: int = DEFAULT_CHUNK,
) -> CountResult:
    """Exact N(e): tuples (t_0..t_e) with |t_s| < q^(s+1) and F_j(t) = 0 for all j."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    budget = budget_from_env() if budget is None else budget
    system = FormSystem(tensor_from_form(f), e)
    if strategy == "naive":
        N, work, roots = _count_naive(system, budget, chunk)
    elif strategy == "root-first":
        N, work, roots = _count_root_first(system, f, budget, chunk, threads)
    else:
        N, work, roots = _count_linear(system, f, budget, chunk, threads)
    box = BoxSpec(f.n, system.slot_bounds).cardinality(f.q)
    dims = expected_dims(f.n, f.d, e)
    ratio = Fraction(N, f.q**dims.muhat) if dims.muhat >= 0 else Fraction(N * f.q ** (-dims.muhat))
    return CountResult(f.q, e, N, box, dims.muhat, ratio, strategy, work, roots)


def ratio_report(forms, e: int, strategy: str = "root-first", **kwargs):
    """Rows (q, N, q^muhat, ratio) for the same form shape over several fields.

    ``forms`` is a list of Hypersurface, one per field.  Nothing about the
    asymptotic is asserted here.
    """
    if not forms:
        raise ValueError("no hypersurfaces given")
    rows = []
    for f in forms:
        res = count_N(f, e, strategy, **kwargs)
        rows.append(
            {
                "q": f.q,
                "N": res.N,
                "q_muhat": Fraction(f.q) ** res.muhat,
                "ratio": res.ratio,
                "ratio_float": res.ratio_float,
                "muhat": res.muhat,
            }
        )
    return rows

