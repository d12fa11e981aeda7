"""Command-line interface.

Exit codes: 0 success, 2 usage or validation error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import datetime
import math
import sys
from fractions import Fraction

from . import __version__
from .asymptotics import (
    DomainError,
    asymptotic_solution,
    convergence_report,
    limiting_value,
    threshold_equation_root,
)
from .formats import format_number, to_json, write_csv
from .model import (
    CostError,
    HorizonError,
    ProblemSpec,
    StopCostError,
    TimeIndexError,
    Variant,
    as_cost,
    validate_spec,
)
from .simulator import OracleBoundError, estimate_value, exhaustive_oracle
from .solver import ExactModeBoundError, ThresholdRule, exact_solve, rule_value, solve

EXIT_USAGE = 2
EXIT_VERIFY = 3

PRESETS = {
    "paper-table-1": Variant.COST_AT_END,
    "paper-table-2": Variant.NO_COST_AT_END,
}
PRESET_HORIZONS = [5, 10, 15, 50, 100]
PRESET_COSTS = [Fraction(0), Fraction(1, 10), Fraction(2, 10)]

TABLE_COLUMNS = ["n", "c", "variant", "k0", "value", "tie"]
PLOT_COLUMNS = ["n", "c", "variant", "k0", "k0_over_n", "value", "limit_root", "limit_value"]


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")


def _flag_for(exc: StopCostError) -> str:
    if isinstance(exc, (HorizonError, ExactModeBoundError, OracleBoundError)):
        return "--n"
    if isinstance(exc, (CostError, DomainError)):
        return "--c"
    if isinstance(exc, TimeIndexError):
        return "--k0"
    return "arguments"


def _cost_arg(text: str):
    try:
        return as_cost(text)
    except CostError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cost_list(text: str):
    return [_cost_arg(t) for t in text.split(",") if t.strip()]


def _int_list(text: str):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _variant(args) -> Variant:
    return Variant.NO_COST_AT_END if args.no_terminal_cost else Variant.COST_AT_END


def _spec(n, c, variant, exact: bool) -> ProblemSpec:
    spec = validate_spec(ProblemSpec(n, c, variant))
    return spec.to_exact() if exact else spec.to_float()


def _meta(args) -> dict | None:
    if not getattr(args, "meta", False):
        return None
    return {
        "tool": f"stopcost {__version__}",
        "command": args.command,
        "generated": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }


def _emit_record(rec: dict, as_json: bool, out) -> None:
    if as_json:
        out.write(to_json(rec))
    else:
        for key, val in rec.items():
            if isinstance(val, dict):
                for k, v in val.items():
                    out.write(f"{key}[{k}]: {format_number(v)}\n")
            else:
                out.write(f"{key}: {val if isinstance(val, str) else format_number(val)}\n")


def _solve_row(n, c, variant, exact: bool) -> dict:
    spec = _spec(n, c, variant, exact)
    res = exact_solve(spec) if exact else solve(spec)
    return {
        "n": n,
        "c": spec.cost,
        "variant": variant.value,
        "k0": res.k0,
        "value": res.value,
        "monotone_case": res.monotone_case,
        "tie": res.tie,
    }


def cmd_solve(args, out) -> int:
    row = _solve_row(args.n, args.c, _variant(args), args.exact)
    rec = {k: row[k] for k in ("n", "c", "variant", "k0", "value", "monotone_case")}
    _emit_record(rec, args.json, out)
    return 0


def table_rows(horizons, costs, variant: Variant, exact: bool = False) -> list[dict]:
    grid = sorted((n, Fraction(c) if exact else float(c)) for n in horizons for c in costs)
    return [_solve_row(n, c, variant, exact) for n, c in grid]


def cmd_table(args, out) -> int:
    if args.preset:
        horizons, costs, variant = PRESET_HORIZONS, PRESET_COSTS, PRESETS[args.preset]
    else:
        if not args.n_list:
            raise UsageError("--n-list", "empty horizon grid")
        if not args.c_list:
            raise UsageError("--c-list", "empty cost grid")
        horizons, costs, variant = args.n_list, args.c_list, _variant(args)
    rows = table_rows(horizons, costs, variant, args.exact)
    if args.format == "json":
        out.write(to_json([{k: r[k] for k in TABLE_COLUMNS} for r in rows], _meta(args)))
    else:
        out.write(write_csv(rows, TABLE_COLUMNS, _meta(args)))
    return 0


def _doubling(n_min: int, n_max: int) -> list[int]:
    out, n = [], n_min
    while n <= n_max:
        out.append(n)
        n *= 2
    return out


def cmd_asymptotic(args, out) -> int:
    variant = _variant(args)
    sol = asymptotic_solution(args.c, variant)
    rec = {
        "c": float(args.c),
        "variant": variant.value,
        "root": sol.root,
        "limit_value": sol.limit_value,
        "residual": sol.tolerance_achieved,
    }
    status = 0
    if args.check:
        rep = convergence_report(args.c, variant, _doubling(args.n_min, args.n_max))
        rec["convergence"] = [
            {
                "n": r.horizon,
                "k0": r.k0,
                "k0_over_n": r.k0_over_n,
                "value": r.value,
                "threshold_gap": r.threshold_gap,
                "value_gap": r.value_gap,
            }
            for r in rep.rows
        ]
        rec["threshold_converging"] = rep.threshold_converging
        rec["value_converging"] = rep.value_converging
        if not (rep.threshold_converging and rep.value_converging):
            status = EXIT_VERIFY
    if args.json:
        out.write(to_json(rec))
    else:
        rows = rec.pop("convergence", None)
        _emit_record(rec, False, out)
        if rows is not None:
            out.write(write_csv(rows, list(rows[0]) if rows else ["n"]))
    return status


def _rule(args, spec: ProblemSpec) -> ThresholdRule:
    if args.k0 is None:
        return (exact_solve(spec) if spec.exact else solve(spec)).rule
    if not 1 <= args.k0 <= spec.horizon:
        raise UsageError("--k0", f"must lie in 1..{spec.horizon}, got {args.k0}")
    return ThresholdRule(args.k0)


def cmd_simulate(args, out) -> int:
    if args.samples < 1:
        raise UsageError("--samples", "must be >= 1")
    spec = _spec(args.n, args.c, _variant(args), exact=False)
    rule = _rule(args, spec)
    est = estimate_value(spec, rule, args.samples, args.seed, args.workers)
    rec = {
        "n": spec.horizon,
        "c": spec.cost,
        "variant": spec.variant.value,
        "k0": rule.k0,
        "value": est.recombined_value,
        "std_error": est.std_error,
        "mean_value_part": est.mean_value_part,
        "mean_cost_prob": est.mean_cost_prob,
        "unconditional_value": est.unconditional_value,
        "unconditional_std_error": est.unconditional_std_error,
        "samples": est.samples,
        "seed": est.seed,
    }
    status = 0
    if args.against_solver:
        dp = float(rule_value(spec, rule.k0))
        diff = est.recombined_value - dp
        if est.std_error > 0:
            z = diff / est.std_error
        else:
            z = 0.0 if abs(diff) < 1e-12 else math.inf
        rec["solver_value"] = dp
        rec["z_score"] = z
        if abs(z) > 5:
            status = EXIT_VERIFY
    _emit_record(rec, args.json, out)
    return status


def cmd_oracle(args, out) -> int:
    spec = _spec(args.n, args.c, _variant(args), exact=True)
    rule = _rule(args, spec)
    res = exhaustive_oracle(spec, rule)
    rec = {
        "n": spec.horizon,
        "c": spec.cost,
        "variant": spec.variant.value,
        "k0": rule.k0,
        "value": res.value,
        "stop_distribution": res.stop_distribution,
    }
    status = 0
    if args.against_solver:
        dp = rule_value(spec, rule.k0)
        rec["solver_value"] = dp
        rec["agrees"] = dp == res.value
        if dp != res.value:
            status = EXIT_VERIFY
    _emit_record(rec, args.json, out)
    return status


def plot_rows(horizons, costs, variant: Variant) -> list[dict]:
    rows = []
    for n, c in sorted((n, float(c)) for n in horizons for c in costs):
        spec = _spec(n, c, variant, exact=False)
        res = solve(spec)
        if c > 0:
            root, lim = threshold_equation_root(c, variant), limiting_value(c, variant)
        else:
            root, lim = 0.0, 1.0
        rows.append(
            {
                "n": n,
                "c": c,
                "variant": variant.value,
                "k0": res.k0,
                "k0_over_n": res.k0 / n,
                "value": float(res.value),
                "limit_root": root,
                "limit_value": lim,
            }
        )
    return rows


def cmd_plotdata(args, out) -> int:
    horizons = args.n_list or (_doubling(args.n_min, args.n_max) if args.n_max else [])
    if not horizons:
        raise UsageError("--n-list", "empty horizon grid (give --n-list or --n-max)")
    if not args.c_list:
        raise UsageError("--c-list", "empty cost grid")
    out.write(write_csv(plot_rows(horizons, args.c_list, _variant(args)), PLOT_COLUMNS, _meta(args)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stopcost",
        description="Rank-based best-choice problem with cardinal payoffs and a cost of choice.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def variant_flag(sp):
        sp.add_argument(
            "--no-terminal-cost",
            action="store_true",
            help="no cost when forced to take the last applicant",
        )

    sp = sub.add_parser("solve", help="optimal threshold and value")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=_cost_arg, required=True, help="cost, decimal or p/q")
    variant_flag(sp)
    sp.add_argument("--exact", action="store_true", help="rational arithmetic, p/q output")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("table", help="grid of solves as CSV or JSON")
    sp.add_argument("--preset", choices=sorted(PRESETS))
    sp.add_argument("--n-list", type=_int_list, default=[])
    sp.add_argument("--c-list", type=_cost_list, default=[])
    variant_flag(sp)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--meta", action="store_true", help="prepend run metadata")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("asymptotic", help="limiting threshold fraction and value")
    sp.add_argument("--c", type=_cost_arg, required=True)
    variant_flag(sp)
    sp.add_argument("--check", action="store_true", help="append a convergence report")
    sp.add_argument("--n-min", type=int, default=100)
    sp.add_argument("--n-max", type=int, default=10**6)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_asymptotic)

    sp = sub.add_parser("simulate", help="Monte Carlo value of a threshold rule")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=_cost_arg, required=True)
    sp.add_argument("--k0", type=int, help="threshold (default: the optimal one)")
    variant_flag(sp)
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--against-solver", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("oracle", help="exact value of a threshold rule by enumeration")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=_cost_arg, required=True)
    sp.add_argument("--k0", type=int)
    variant_flag(sp)
    sp.add_argument("--against-solver", action="store_true")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("plotdata", help="threshold and value sweep as CSV")
    sp.add_argument("--n-list", type=_int_list, default=[])
    sp.add_argument("--n-min", type=int, default=10)
    sp.add_argument("--n-max", type=int)
    sp.add_argument("--c-list", type=_cost_list, default=[])
    variant_flag(sp)
    sp.add_argument("--meta", action="store_true")
    sp.set_defaults(func=cmd_plotdata)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"stopcost {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except StopCostError as exc:
        sys.stderr.write(f"stopcost {args.command}: error: {_flag_for(exc)}: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
