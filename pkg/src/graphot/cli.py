"""Command-line front end: solve wd / gwd / got on embedding files, run sweeps and demos.

Exit codes: 0 success, 1 input error (bad flags, unreadable or malformed
files, invalid hyper-parameters), 2 solver conditioning error.
"""

from __future__ import annotations

import argparse
import sys

from .core import SolverConfig, build_graph, cosine_cost_matrix, uniform_marginal
from .fused import ProjectionPair, solve_got
from .gromov import solve_gwd
from .harness import DEFAULT_SWEEP_LAMBDAS, evaluate_plan, generate_pair, run_sweep, sweep_csv
from .io import PlanFile, load_embeddings, save_plan
from .sinkhorn import ConditioningError, solve_wd
from .viz import render_heatmap

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CONDITIONING_ERROR = 2

DEMO_N = 8
DEMO_DIM = 16
DEMO_NOISE = 0.05


class _Parser(argparse.ArgumentParser):
    """argparse maps usage errors to exit code 2; this front end reserves 2 for
    conditioning failures, so flag errors exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT_ERROR)


def _lambda_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"could not parse lambda list {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("lambda list is empty")
    return values


def _add_input_flags(p):
    p.add_argument("--x", required=True, help="embedding file for the first domain")
    p.add_argument("--y", required=True, help="embedding file for the second domain")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_config_flags(p, *, lam=False, tau=False, mode=False):
    p.add_argument("--beta", type=float, default=None, help="proximal step weight (> 0)")
    p.add_argument("--inner-iters", type=int, default=None, help="Sinkhorn sweeps per step")
    p.add_argument("--outer-iters", type=int, default=None, help="iteration cap")
    if lam:
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="node/structure mix in [0, 1]")
    if tau:
        p.add_argument("--tau", type=float, default=None, help="graph similarity threshold")
    if mode:
        p.add_argument("--mode", choices=("shared", "unshared"), default=None)


def _add_output_flags(p):
    p.add_argument("--plan-out", default=None, help="write the plan as JSON")
    p.add_argument("--svg-out", default=None, help="write a heatmap of the plan")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_wd = sub.add_parser("wd", help="node-matching distance between two embedding files")
    _add_input_flags(p_wd)
    _add_config_flags(p_wd)
    _add_output_flags(p_wd)
    p_wd.set_defaults(handler=_cmd_wd)

    p_gwd = sub.add_parser("gwd", help="structure-matching distance between two embedding files")
    _add_input_flags(p_gwd)
    _add_config_flags(p_gwd, tau=True)
    _add_output_flags(p_gwd)
    p_gwd.set_defaults(handler=_cmd_gwd)

    p_got = sub.add_parser("got", help="fused distance between two embedding files")
    _add_input_flags(p_got)
    _add_config_flags(p_got, lam=True, tau=True, mode=True)
    _add_output_flags(p_got)
    p_got.set_defaults(handler=_cmd_got)

    p_sweep = sub.add_parser("sweep", help="lambda sweep on a seeded synthetic pair (CSV to stdout)")
    p_sweep.add_argument("--lambdas", type=_lambda_list, default=list(DEFAULT_SWEEP_LAMBDAS),
                         help="comma-separated lambda values in [0, 1]")
    p_sweep.add_argument("--seed", type=int, default=0)
    _add_config_flags(p_sweep, tau=True, mode=True)
    p_sweep.set_defaults(handler=_cmd_sweep)

    p_demo = sub.add_parser("demo", help="fused alignment of a seeded synthetic pair")
    p_demo.add_argument("--seed", type=int, default=0)
    _add_config_flags(p_demo, lam=True, tau=True, mode=True)
    _add_output_flags(p_demo)
    p_demo.set_defaults(handler=_cmd_demo)

    return parser


def _config_from(args) -> SolverConfig:
    overrides = {}
    for flag, field in (
        ("beta", "beta"),
        ("inner_iters", "inner_iters"),
        ("outer_iters", "outer_iters"),
        ("lam", "lam"),
        ("tau", "tau"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    mode = getattr(args, "mode", None)
    if mode is not None:
        overrides["shared_plan"] = mode == "shared"
    return SolverConfig(**overrides)


def _plan_metadata(solver: str, distance: float, plan, config: SolverConfig) -> dict:
    return {
        "solver": solver,
        "distance": distance,
        "config": {
            "beta": config.beta,
            "outer_iters": config.outer_iters,
            "inner_iters": config.inner_iters,
            "lambda": config.lam,
            "tau": config.tau,
            "shared_plan": config.shared_plan,
            "marginal_tol": config.marginal_tol,
            "convergence_tol": config.convergence_tol,
        },
        "marginal_tol": plan.marginal_tol,
        "row_marginal": [float(w) for w in plan.row_marginal.weights],
        "col_marginal": [float(w) for w in plan.col_marginal.weights],
    }


def _emit(args, solver, distance, plan, row_labels, col_labels, config):
    print(f"distance={distance:.9g}")
    if not (args.plan_out or args.svg_out):
        return
    plan_file = PlanFile(
        row_labels=list(row_labels),
        col_labels=list(col_labels),
        entries=plan.entries,
        metadata=_plan_metadata(solver, distance, plan, config),
    )
    if args.plan_out:
        save_plan(args.plan_out, plan_file)
    if args.svg_out:
        render_heatmap(plan_file, args.svg_out)


def _cmd_wd(args):
    x, x_labels = load_embeddings(args.x, args.format)
    y, y_labels = load_embeddings(args.y, args.format)
    config = _config_from(args)
    cost = cosine_cost_matrix(x, y)
    result = solve_wd(cost, uniform_marginal(x.count), uniform_marginal(y.count), config)
    _emit(args, "wd", result.distance, result.plan, x_labels, y_labels, config)


def _cmd_gwd(args):
    x, x_labels = load_embeddings(args.x, args.format)
    y, y_labels = load_embeddings(args.y, args.format)
    config = _config_from(args)
    cx = build_graph(x, config.tau)
    cy = build_graph(y, config.tau)
    result = solve_gwd(cx, cy, uniform_marginal(x.count), uniform_marginal(y.count), config)
    _emit(args, "gwd", result.distance, result.plan, x_labels, y_labels, config)


def _cmd_got(args):
    x, x_labels = load_embeddings(args.x, args.format)
    y, y_labels = load_embeddings(args.y, args.format)
    config = _config_from(args)
    result = solve_got(x, y, ProjectionPair(), config)
    _emit(args, "got", result.distance, result.alignment_plan, x_labels, y_labels, config)


def _cmd_sweep(args):
    config = _config_from(args)
    pair = generate_pair(DEMO_N, DEMO_DIM, DEMO_NOISE, args.seed)
    rows = run_sweep(args.lambdas, config, pair)
    sys.stdout.write(sweep_csv(rows))


def _cmd_demo(args):
    config = _config_from(args)
    pair = generate_pair(DEMO_N, DEMO_DIM, DEMO_NOISE, args.seed)
    result = solve_got(pair.x, pair.y, ProjectionPair(), config)
    metrics = evaluate_plan(result.alignment_plan, pair.correspondence)
    row_labels = [f"x{i}" for i in range(pair.x.count)]
    col_labels = [f"y{j}" for j in range(pair.y.count)]
    _emit(args, "got", result.distance, result.alignment_plan, row_labels, col_labels, config)
    print(f"accuracy={metrics.row_argmax_accuracy:.4f}")
    print(f"entropy={metrics.entropy:.9g}")


def run_command(argv) -> int:
    """Parse argv, run the selected command, map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT_ERROR
    try:
        args.handler(args)
    except ConditioningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONDITIONING_ERROR
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return EXIT_OK


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
