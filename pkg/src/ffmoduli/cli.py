"""Command-line entry point: one subcommand per check, JSON results, exit code 0 iff all pass."""
from __future__ import annotations

import argparse
import json
import platform
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, circle
from .acceptance import CRITERIA, random_mpoly, random_shrink_instance, run_all
from .counting import STRATEGIES, budget_from_env, count_N, ratio_report
from .errors import BudgetExceeded, ContractViolation, ParameterError
from .ff_core import LaurentNum, PrecisionError
from .forms import (
    FormSystem,
    Hypersurface,
    MorphismCoeffs,
    build_G_j,
    decomposition_check,
    fermat_smallchar_check,
    smoothness_check,
    split_index,
    tensor_from_form,
)

SCHEMA = "ffmoduli/1"


@dataclass
class RunConfig:
    config: Optional[str]
    e: int
    strategy: str
    threads: int
    seed: int
    budget_box: int
    budget_grid: int
    out: Optional[str]

    def __post_init__(self):
        if self.budget_box <= 0 or self.budget_grid <= 0:
            raise ParameterError("budgets must be positive")
        if self.threads < 1:
            raise ParameterError("threads must be >= 1")


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (str, float)):
        return x
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, np.floating):
        return float(x)
    return str(x)


def _load_form(path) -> Hypersurface:
    if path is None:
        raise ParameterError("this command needs --config")
    with open(path) as fh:
        return Hypersurface.from_dict(json.load(fh))


def _versions():
    return {"ffmoduli": __version__, "numpy": np.__version__, "python": platform.python_version()}


# -- commands -------------------------------------------------------------------------
# Each returns (payload dict, passed flag).  Payload integers become decimal strings.


def cmd_count_n(cfg, args):
    f = _load_form(cfg.config)
    res = count_N(f, cfg.e, cfg.strategy, threads=cfg.threads, budget=cfg.budget_box)
    out = res.to_dict()
    out["ratio_float"] = res.ratio_float
    return out, True


def cmd_circle_exact(cfg, args):
    f = _load_form(cfg.config)
    Nc = count_N(f, cfg.e, cfg.strategy, threads=cfg.threads, budget=cfg.budget_box).N
    Ni = circle.exact_integral_N(f, cfg.e, budget=cfg.budget_grid)
    return {"N_count": str(Nc), "N_integral": str(Ni), "match": Nc == Ni}, Nc == Ni


def cmd_verify_decomposition(cfg, args):
    f = _load_form(cfg.config)
    rng = np.random.default_rng(cfg.seed)
    fails = 0
    for _ in range(args.samples):
        if not decomposition_check(f, MorphismCoeffs.random(f.field, f.n, cfg.e, rng)):
            fails += 1
    return {"checked": args.samples, "failures": fails}, fails == 0


def cmd_weyl(cfg, args):
    f = _load_form(cfg.config)
    F = f.field
    rng = np.random.default_rng(cfg.seed)
    zero_fail = diag_fail = 0
    for k in range(args.samples):
        P = random_mpoly(F, 1 + k % 2, 1 + k % 4, rng)
        if not circle.symbolic_difference(P, P.total_degree() + 1).is_zero():
            zero_fail += 1
        lhs, rhs = circle.diagonal_identity_sides(P, rng.integers(F.q, size=P.nvars))
        diag_fail += lhs != rhs
    ok = zero_fail == 0 and diag_fail == 0
    return {"checked": args.samples, "vanishing_failures": zero_fail, "diagonal_failures": diag_fail}, ok


def cmd_decouple(cfg, args):
    f = _load_form(cfg.config)
    rep = circle.decouple_grid_check(f, cfg.e, budget=cfg.budget_grid)
    return rep, rep["pass"]


def cmd_t_sum_bound(cfg, args):
    f = _load_form(cfg.config)
    rng = np.random.default_rng(cfg.seed)
    js = [args.j] if args.j is not None else list(range(f.d * cfg.e + 1))
    reps = {f"j={j}": circle.t_sum_grid_check(f, cfg.e, j, rng=rng, budget=cfg.budget_grid) for j in js}
    return reps, all(r["pass"] for r in reps.values())


def _piece(cfg, args):
    f = _load_form(cfg.config)
    j = 1 if args.j is None else args.j
    G = build_G_j(tensor_from_form(f), cfg.e, j)
    return f, G, circle.params_for(G, args.J)


def _random_alpha(F, floor, rng):
    return LaurentNum.random(F, -1, floor, rng)


def cmd_n_counts(cfg, args):
    f, G, params = _piece(cfg, args)
    rng = np.random.default_rng(cfg.seed)
    rows, ok = [], True
    floor = -(4 * (params.P1 + params.P2) * G.d + 4)
    for _ in range(args.samples):
        alpha = _random_alpha(f.field, floor, rng)
        rep = circle.n_count_inequality_check(G, params, alpha, budget=cfg.budget_box)
        n2_q0 = circle.n_counts(G, params, alpha, 0, "N2", Q=(params.Q1, 0), budget=cfg.budget_box)
        indep = n2_q0 == rep["lhs"]
        ok &= rep["pass"] and indep
        rows.append({**rep, "N2_independent_of_Q2": indep})
    return {"params": params.to_dict(), "j": G.j, "rows": rows}, ok


def cmd_shrink(cfg, args):
    f = _load_form(cfg.config)
    rng = np.random.default_rng(cfg.seed)
    rows, ok = [], True
    for _ in range(args.samples):
        gam, A, Z1, Z2 = random_shrink_instance(f.field, rng)
        rep = circle.shrink_check(gam, A, Z1, Z2, budget=cfg.budget_box)
        ok &= rep["pass"]
        rows.append({"N": len(gam), "A": A, "Z1": Z1, "Z2": Z2, **rep})
    return {"rows": rows}, ok


def cmd_approx(cfg, args):
    f = _load_form(cfg.config)
    rng = np.random.default_rng(cfg.seed)
    m, fails = args.m, 0
    rows = []
    for _ in range(args.samples):
        alpha = LaurentNum.random(f.field, -1, -(2 * m + 1), rng)
        r = circle.rational_approx(alpha, m)
        best = circle.best_denominator_exhaustive(alpha, m)
        good = best == r.g
        fails += not good
        rows.append({"alpha": repr(alpha), **r.to_dict(), "matches_search": good})
    return {"m": m, "rows": rows, "failures": fails}, fails == 0


def cmd_major_arc(cfg, args):
    f, G, params = _piece(cfg, args)
    rng = np.random.default_rng(cfg.seed)
    need = circle.arcs.major_arc_radius(params) - (params.d - 1) * (params.J - 1)
    fails, inside = 0, 0
    for _ in range(args.samples):
        alpha = _random_alpha(f.field, min(need, -1), rng)
        a = circle.major_arc_test(alpha, params)
        b = circle.major_arc_exhaustive(alpha, params)
        fails += a != b
        inside += a
    return {"params": params.to_dict(), "checked": args.samples, "on_arc": inside, "disagreements": fails}, fails == 0


def cmd_dichotomy(cfg, args):
    f, G, params = _piece(cfg, args)
    rep = circle.dichotomy_grid(G, params, budget=cfg.budget_grid)
    return {"j": G.j, "params": params.to_dict(), **rep}, rep["pass"]


def cmd_sigma(cfg, args):
    f = _load_form(cfg.config)
    smooth = smoothness_check(f)
    tensor = tensor_from_form(f)
    rows, ok = [], True
    for j in range(f.d * cfg.e + 1):
        G = build_G_j(tensor, cfg.e, j)
        rep = circle.sigma_estimate(G, m_max=args.m_max)
        row = {"j": j, "d1": G.d1, "d2": G.d2, **rep.to_dict()}
        if smooth and not rep.heuristic:
            row["sigma_at_least_n"] = rep.sigma >= f.n
            ok &= rep.sigma >= f.n
        rows.append(row)
    return {"smooth": smooth, "n": f.n, "rows": rows}, ok


def cmd_mean_value(cfg, args):
    f, G, params = _piece(cfg, args)
    rep = circle.arc_shell_integral(G, params, Fraction(args.rho), budget=cfg.budget_grid)
    return rep, rep["pass"]


def cmd_smallchar(cfg, args):
    if args.p is None:
        raise ParameterError("smallchar needs --p")
    rep = fermat_smallchar_check(cfg.e, args.p, d=args.d)
    out = rep.to_dict()
    expected = rep.stated_shape
    return out, rep.F_next_vanishes if expected else True


def cmd_ratio_report(cfg, args):
    if cfg.config is None:
        raise ParameterError("ratio-report needs --config pointing at a directory of configs")
    path = Path(cfg.config)
    files = sorted(path.glob("*.json")) if path.is_dir() else [path]
    forms = sorted((_load_form(p) for p in files), key=lambda f: f.q)
    rows = ratio_report(forms, cfg.e, cfg.strategy, threads=cfg.threads, budget=cfg.budget_box)
    return {"rows": rows}, all(r["ratio"] > 0 for r in rows)


def cmd_acceptance(cfg, args):
    only = set(args.only) if args.only else None
    results = run_all(cfg.seed, only)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"criteria": [r.to_dict() for r in results]}, all(r.passed for r in results)


COMMANDS = {
    "count-n": cmd_count_n,
    "circle-exact": cmd_circle_exact,
    "verify-decomposition": cmd_verify_decomposition,
    "weyl-identities": cmd_weyl,
    "decouple": cmd_decouple,
    "lemma-t-bound": cmd_t_sum_bound,
    "n-counts": cmd_n_counts,
    "shrink": cmd_shrink,
    "approx": cmd_approx,
    "major-arc": cmd_major_arc,
    "dichotomy": cmd_dichotomy,
    "sigma": cmd_sigma,
    "mean-value": cmd_mean_value,
    "smallchar": cmd_smallchar,
    "ratio-report": cmd_ratio_report,
    "acceptance": cmd_acceptance,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffmoduli", description="Exact checks for the F_q[u] circle method.")
    parser.add_argument("command", choices=sorted(COMMANDS), help="what to run")
    parser.add_argument("--config", help="hypersurface JSON file (a directory for ratio-report)")
    parser.add_argument("--e", type=int, default=1, help="degree of the maps (default 1)")
    parser.add_argument("--strategy", choices=STRATEGIES, default="root-first")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-box", type=int, default=None, help="cap on enumerated box points")
    parser.add_argument("--budget-grid", type=int, default=None, help="cap on grid phase evaluations")
    parser.add_argument("--out", help="write the JSON result here as well as to stdout")
    parser.add_argument("--samples", type=int, default=20, help="random instances for sampled checks")
    parser.add_argument("--j", type=int, default=None, help="index of the piece G_j")
    parser.add_argument("--J", type=int, default=1, help="major-arc level")
    parser.add_argument("--m", type=int, default=3, help="approximation depth for approx")
    parser.add_argument("--m-max", type=int, default=3, help="largest extension degree for sigma point counts")
    parser.add_argument("--rho", default="1", help="exponent for mean-value (a rational like 5/2)")
    parser.add_argument("--p", type=int, default=None, help="characteristic for smallchar")
    parser.add_argument("--d", type=int, default=None, help="degree override for smallchar")
    parser.add_argument("--only", type=int, nargs="*", help="criterion numbers for acceptance")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # unknown command: usage and exit status 2
    env_cap = budget_from_env()
    cfg = RunConfig(
        args.config,
        args.e,
        args.strategy,
        args.threads,
        args.seed,
        args.budget_box if args.budget_box is not None else env_cap,
        args.budget_grid if args.budget_grid is not None else env_cap,
        args.out,
    )
    header = {
        "schema": SCHEMA,
        "command": args.command,
        "parameters": {k: v for k, v in vars(args).items() if k != "command"},
        "seed": cfg.seed,
        "versions": _versions(),
    }
    if cfg.config and Path(cfg.config).is_file():
        try:
            f = _load_form(cfg.config)
            header["q"] = f.q
            header["hypersurface"] = f.to_dict()
        except (OSError, ValueError, KeyError):
            pass
    try:
        payload, passed = COMMANDS[args.command](cfg, args)
        status = 0 if passed else 1
        result = {**header, "result": payload, "pass": passed}
    except (BudgetExceeded, ContractViolation, ParameterError, PrecisionError, ValueError, NotImplementedError, ArithmeticError, OSError) as exc:
        status = 1
        result = {**header, "error": {"type": type(exc).__name__, "message": str(exc)}, "pass": False}
    text = json.dumps(_jsonable(result), indent=2, sort_keys=True)
    print(text)
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
