"""Command-line front end.

Every capability is a subcommand emitting a JSON envelope (or CSV where the
result is a table) on stdout; errors go to stderr as a JSON object. Exit
codes: 0 success, 1 usage error, 2 domain error, 3 non-convergence. All
inputs are explicit flags; there is no environment or network dependence.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__
from .combinatorics import ExperimentDesign, loss_class_table
from .dominance import fosd_check
from .entropy import max_entropy
from .errors import ConvergenceError, TeaTestError
from .exact_tests import (
    DEFAULT_LEVEL,
    LEFT_SUCCESS,
    RIGHT_SUCCESS,
    TWO_SIDED,
    exact_size,
    p_value,
    power,
    region_by_name,
)
from .figures import entropy_grid, grid_rows, optimal_path, path_rows
from .gibbs import optimal_distribution
from .output import rows_to_csv, to_json
from .simulate import SimConfig, run_simulation

_REGION_NAMES = ["fisher-right", "information-left", "two-sided-union"]
_DEFAULT_PAYOFFS = {2: [1.0, 3.0], 3: [1.0, 2.0, 5.0]}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _envelope(command: str, parameters: dict, results: dict) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "results": results,
        "tool_version": __version__,
    }


def _cmd_table(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    rows = [
        {"class": k, "successes": b, "multiplicity": a, "loss": l}
        for k, (b, a, l) in enumerate(
            zip(table.successes, table.multiplicities, table.losses), start=1
        )
    ]
    if args.format == "csv":
        return rows_to_csv(["class", "successes", "multiplicity", "loss"], rows)
    parameters = {"cups": args.cups, "tm": args.tm, "format": args.format}
    results = {"classes": rows, "total": table.total, "max_entropy": max_entropy(design)}
    return to_json(_envelope("table", parameters, results))


def _cmd_solve(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    h_max = max_entropy(design)
    h = args.entropy if args.entropy is not None else args.entropy_frac * h_max
    solution = optimal_distribution(table, h)
    parameters = {
        "cups": args.cups,
        "tm": args.tm,
        "entropy": args.entropy,
        "entropy_frac": args.entropy_frac,
    }
    results = {
        "entropy_target": h,
        "entropy_achieved": solution.entropy,
        "beta": solution.beta,
        "probabilities": list(solution.dist.probabilities),
        "class_masses": list(solution.dist.class_masses()),
        "expected_loss": solution.expected_loss,
        "expected_successes": solution.expected_successes,
        "log_normalizer": solution.log_normalizer,
        "dirac_limit": solution.dirac_limit,
    }
    return to_json(_envelope("solve", parameters, results))


def _cmd_test(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    region = region_by_name(table, args.region)
    report = exact_size(table, region, level=args.level)
    observed_class = table.class_of_loss(args.observed_loss)
    tails = {
        tail: p_value(table, args.observed_loss, tail)
        for tail in (RIGHT_SUCCESS, LEFT_SUCCESS, TWO_SIDED)
    }
    parameters = {
        "cups": args.cups,
        "tm": args.tm,
        "observed_loss": args.observed_loss,
        "region": args.region,
        "level": args.level,
    }
    results = {
        "size_numerator": report.size_numerator,
        "size_denominator": report.size_denominator,
        "size": report.size,
        "level": report.level,
        "rejects_at_level": report.rejects_at_level,
        "observed_class": observed_class,
        "reject_null": observed_class in region.classes,
        "p_values": {
            tail: {"numerator": pv.numerator, "denominator": pv.denominator, "value": pv.value}
            for tail, pv in tails.items()
        },
    }
    return to_json(_envelope("test", parameters, results))


def _parse_h_grid(spec: str, h_max: float) -> list[float]:
    if spec.startswith("linear:"):
        tail = spec[len("linear:") :]
        try:
            count = int(tail)
        except ValueError:
            raise UsageError(f"bad grid spec {spec!r}: expected linear:<count>") from None
        if count < 1:
            raise UsageError(f"grid count must be >= 1, got {count}")
        return [h_max * (i / count) for i in range(1, count + 1)]
    try:
        return [float(tok) for tok in spec.split(",")]
    except ValueError:
        raise UsageError(
            f"bad grid spec {spec!r}: expected comma-separated values or linear:<count>"
        ) from None


def _cmd_power(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    region = region_by_name(table, args.region)
    grid = _parse_h_grid(args.h_grid, max_entropy(design))
    rows = [{"h": h, "power": power(table, region, h)} for h in grid]
    if args.format == "csv":
        return rows_to_csv(["h", "power"], rows)
    parameters = {
        "cups": args.cups,
        "tm": args.tm,
        "region": args.region,
        "h_grid": args.h_grid,
        "format": args.format,
    }
    return to_json(_envelope("power", parameters, {"points": rows}))


def _cmd_simulate(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    region = region_by_name(table, args.region)
    config = SimConfig(
        design=design,
        region=region,
        replications=args.reps,
        seed=args.seed,
        entropy_level=None if args.null else args.entropy,
        workers=args.workers,
    )
    report = run_simulation(config)
    parameters = {
        "cups": args.cups,
        "tm": args.tm,
        "entropy": config.entropy_level,
        "region": args.region,
        "reps": args.reps,
        "seed": args.seed,
        "workers": args.workers,
    }
    results = {
        "rejection_rate": report.rejection_rate,
        "standard_error": report.standard_error,
        "mean_loss": report.mean_loss,
        "loss_histogram": list(report.loss_histogram),
        "replications": report.replications,
        "seed": report.seed,
    }
    return to_json(_envelope("simulate", parameters, results))


def _cmd_figure(args) -> str:
    if args.payoff is None:
        payoff = _DEFAULT_PAYOFFS[args.dimension]
    else:
        try:
            payoff = [float(tok) for tok in args.payoff.split(",")]
        except ValueError:
            raise UsageError(f"bad payoff {args.payoff!r}: expected comma-separated numbers") from None
        if len(payoff) != args.dimension:
            raise UsageError(
                f"payoff needs {args.dimension} coordinates, got {len(payoff)}"
            )
    h_max = math.log(args.dimension)
    h_grid = [h_max * (i / args.path_points) for i in range(1, args.path_points + 1)]
    grid = entropy_grid(args.dimension, args.resolution)
    path = optimal_path(payoff, h_grid)
    g_rows = grid_rows(grid)
    p_rows = path_rows(path)
    if args.format == "csv":
        fields = ["kind"] + [f"p{i}" for i in range(1, args.dimension + 1)] + ["entropy", "payoff"]
        return rows_to_csv(fields, g_rows + p_rows)
    parameters = {
        "dimension": args.dimension,
        "resolution": args.resolution,
        "payoff": payoff,
        "path_points": args.path_points,
        "format": args.format,
    }
    results = {"grid": g_rows, "path": p_rows, "tied_maxima": path.tied_maxima}
    return to_json(_envelope("figure", parameters, results))


def _cmd_dominance(args) -> str:
    design = ExperimentDesign(args.cups, args.tm)
    table = loss_class_table(design)
    low = optimal_distribution(table, args.h_low)
    high = optimal_distribution(table, args.h_high)
    verdict = fosd_check(low, high)
    parameters = {
        "cups": args.cups,
        "tm": args.tm,
        "h_low": args.h_low,
        "h_high": args.h_high,
    }
    results = {
        "dominates": verdict.dominates,
        "max_violation": verdict.max_violation,
        "low": {"beta": low.beta, "entropy": low.entropy, "expected_loss": low.expected_loss},
        "high": {"beta": high.beta, "entropy": high.entropy, "expected_loss": high.expected_loss},
    }
    return to_json(_envelope("dominance", parameters, results))


def build_parser() -> _Parser:
    parser = _Parser(
        prog="teatest",
        description="Exact tests and entropy-constrained answer models for cup-assignment designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_design(p):
        p.add_argument("--cups", type=int, required=True, help="total number of cups")
        p.add_argument("--tm", type=int, required=True, help="number of TM cups")

    p = sub.add_parser("table", help="loss-class table of a design")
    add_design(p)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("solve", help="entropy-constrained expected-loss minimizer")
    add_design(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--entropy", type=float, help="entropy level in nats")
    group.add_argument("--entropy-frac", type=float, help="entropy as a fraction of the maximum")
    p.set_defaults(handler=_cmd_solve)

    p = sub.add_parser("test", help="exact size, decision and p-values")
    add_design(p)
    p.add_argument("--observed-loss", type=int, required=True)
    p.add_argument("--region", choices=_REGION_NAMES, required=True)
    p.add_argument("--level", type=float, default=DEFAULT_LEVEL)
    p.set_defaults(handler=_cmd_test)

    p = sub.add_parser("power", help="power curve over entropy levels")
    add_design(p)
    p.add_argument("--region", choices=_REGION_NAMES, required=True)
    p.add_argument(
        "--h-grid",
        required=True,
        help="comma-separated entropy levels, or linear:<count> for an even grid up to the maximum",
    )
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_power)

    p = sub.add_parser("simulate", help="seeded Monte Carlo experiment")
    add_design(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--entropy", type=float, help="entropy level of the alternative")
    group.add_argument("--null", action="store_true", help="simulate the uniform null")
    p.add_argument("--region", choices=_REGION_NAMES, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("figure", help="simplex entropy grid and optimal path data")
    p.add_argument("--dimension", type=int, choices=[2, 3], required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--payoff", help="comma-separated payoff coordinates")
    p.add_argument("--path-points", type=int, default=25)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=_cmd_figure)

    p = sub.add_parser("dominance", help="stochastic dominance between two entropy levels")
    add_design(p)
    p.add_argument("--h-low", type=float, required=True)
    p.add_argument("--h-high", type=float, required=True)
    p.set_defaults(handler=_cmd_dominance)

    return parser


def _emit_error(kind: str, message: str):
    print(to_json({"error": kind, "message": message}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload = args.handler(args)
    except UsageError as exc:
        _emit_error("usage-error", str(exc))
        return 1
    except ConvergenceError as exc:
        _emit_error("convergence-error", str(exc))
        return 3
    except (TeaTestError, ValueError) as exc:
        _emit_error("domain-error", str(exc))
        return 2
    print(payload, end="" if payload.endswith("\r\n") else "\n")
    return 0


def run():
    sys.exit(main())
