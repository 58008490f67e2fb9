"""Command-line front end.

Subcommands:

* ``clearing``: settle a network, optionally with a cash-injection file.
* ``optimize-liabilities``: spend a fixed budget to minimize unpaid
  liabilities.
* ``optimize-lagrangian``: let the budget float against a per-unit cost
  on unpaid liabilities.
* ``optimize-defaults``: reweighted heuristic for the fewest defaults.
* ``gen-tree``: write the binary-tree stress network as a network file.
* ``reproduce-figure``: sweep the heuristic over a budget grid on the
  tree and write CSV + SVG.

Exit codes: 0 success, 2 bad input, 3 solver failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import report
from .benchmark import TreeSpec, binary_tree_network, default_budget_grid, run_figure
from .fileio import NetworkFormatError, load_allocation, load_network, save_network
from .lp import LpError
from .network import Allocation, ClearingError, NetworkValidationError, clearing_vector
from .optimize import (
    ReweightParams,
    minimize_defaults,
    minimize_unpaid,
    minimize_unpaid_lagrangian,
)

__all__ = ["build_parser", "main"]


def _nonnegative(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError("must be a finite nonnegative number")
    return value


def _positive(text: str) -> float:
    value = _nonnegative(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("cannot be negative")
    return value


def _grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must look like start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("grid needs three numbers")
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise argparse.ArgumentTypeError("grid values must be finite")
    if start < 0 or step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(
            "grid needs start >= 0, stop >= start, step > 0")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _add_format(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "human"),
                        default="json", help="output format (default json)")
    parser.add_argument("--out", type=Path, default=None,
                        help="write output to a file instead of stdout")


def _add_reweight_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--k", type=_positive, default=1000.0,
                        help="weight ceiling constant (default 1000)")
    parser.add_argument("--epsilon", type=_positive, default=1e-3,
                        help="weight floor softener (default 0.001)")
    parser.add_argument("--delta", type=_positive, default=1e-3,
                        help="stop when weights move less than this (default 0.001)")
    parser.add_argument("--starts", type=_nonnegative_int, default=5,
                        help="random restarts beyond the all-ones start (default 5)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the random restarts (default 0)")
    parser.add_argument("--max-iterations", type=_positive_int, default=50,
                        help="reweighting iterations per start (default 50)")


def _reweight_params(args: argparse.Namespace) -> ReweightParams:
    return ReweightParams(k_const=args.k, epsilon=args.epsilon, delta=args.delta,
                          max_iterations=args.max_iterations,
                          num_random_starts=args.starts, rng_seed=args.seed)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _render_outcome(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return report.dumps(doc)
    if fmt == "csv":
        return report.outcome_csv(doc)
    return report.outcome_text(doc)


def _render_optimization(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return report.dumps(doc)
    if fmt == "csv":
        return report.outcome_csv(doc["outcome"])
    return report.optimization_text(doc)


def _cmd_clearing(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    if args.inject is not None:
        alloc = load_allocation(args.inject, net)
    else:
        alloc = Allocation.zeros(net.n)
    outcome = clearing_vector(net, alloc)
    doc = report.outcome_summary(net, alloc, outcome)
    _emit(_render_outcome(doc, args.format), args.out)
    return 0


def _cmd_optimize_liabilities(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    result = minimize_unpaid(net, args.budget)
    doc = report.optimization_summary(net, "liabilities", result, budget=args.budget)
    _emit(_render_optimization(doc, args.format), args.out)
    return 0


def _cmd_optimize_lagrangian(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    result = minimize_unpaid_lagrangian(net, args.lam)
    doc = report.optimization_summary(net, "lagrangian", result,
                                      cost_weight=args.lam)
    _emit(_render_optimization(doc, args.format), args.out)
    return 0


def _cmd_optimize_defaults(args: argparse.Namespace) -> int:
    net = load_network(args.network)
    result = minimize_defaults(net, args.budget, params=_reweight_params(args))
    doc = report.optimization_summary(net, "defaults", result, budget=args.budget,
                                      params=_reweight_params(args))
    _emit(_render_optimization(doc, args.format), args.out)
    return 0


def _cmd_gen_tree(args: argparse.Namespace) -> int:
    spec = TreeSpec(levels=args.levels)
    net = binary_tree_network(spec)
    save_network(net, args.out)
    manifest = {
        "levels": spec.levels,
        "nodes": spec.node_count,
        "total_obligations": report.round_currency(net.liabilities.sum()),
        "path": str(args.out),
    }
    sys.stdout.write(report.dumps(manifest))
    return 0


def _cmd_reproduce_figure(args: argparse.Namespace) -> int:
    spec = TreeSpec(levels=args.levels)
    budgets = args.grid if args.grid is not None else default_budget_grid(spec)
    manifest = run_figure(spec, budgets=budgets, params=_reweight_params(args),
                          out_dir=args.out)
    sys.stdout.write(report.dumps(manifest))
    return 0 if manifest["failed"] == 0 else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bailnet",
        description="Clearing and cash-injection planning for liability networks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clearing", help="settle a network")
    p.add_argument("network", type=Path, help="network JSON file")
    p.add_argument("--inject", type=Path, default=None,
                   help="cash-injection JSON file")
    _add_format(p)
    p.set_defaults(func=_cmd_clearing)

    p = sub.add_parser("optimize-liabilities",
                       help="minimize unpaid liabilities for a fixed budget")
    p.add_argument("network", type=Path)
    p.add_argument("--budget", type=_nonnegative, required=True)
    _add_format(p)
    p.set_defaults(func=_cmd_optimize_liabilities)

    p = sub.add_parser("optimize-lagrangian",
                       help="minimize budget plus weighted unpaid liabilities")
    p.add_argument("network", type=Path)
    p.add_argument("--lambda", dest="lam", type=_nonnegative, required=True,
                   help="cost per unit of unpaid liabilities")
    _add_format(p)
    p.set_defaults(func=_cmd_optimize_lagrangian)

    p = sub.add_parser("optimize-defaults",
                       help="minimize the default count for a fixed budget")
    p.add_argument("network", type=Path)
    p.add_argument("--budget", type=_nonnegative, required=True)
    _add_reweight_options(p)
    _add_format(p)
    p.set_defaults(func=_cmd_optimize_defaults)

    p = sub.add_parser("gen-tree", help="write the binary-tree stress network")
    p.add_argument("--levels", type=_positive_int, default=10)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=_cmd_gen_tree)

    p = sub.add_parser("reproduce-figure",
                       help="defaults-vs-budget sweep on the tree (CSV + SVG)")
    p.add_argument("--levels", type=_positive_int, default=10)
    p.add_argument("--grid", type=_grid, default=None,
                   help="budget grid start:stop:step, inclusive")
    p.add_argument("--out", type=Path, required=True, help="output directory")
    _add_reweight_options(p)
    p.set_defaults(func=_cmd_reproduce_figure)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NetworkValidationError, NetworkFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LpError, ClearingError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
