"""Command-line entry point.

Subcommands reproduce the five figure datasets plus an ad-hoc bound
evaluation, writing seeded CSV files. Exit codes: 0 on success, 2 for
configuration errors, 3 when a non-finite value reaches an output.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import (
    DEFAULT_ALPHA_VALUES,
    DEFAULT_M_VALUES,
    DEFAULT_N_VALUES,
    DEFAULT_R_VALUES,
    ConfigError,
    NumericError,
    apply_overrides,
    default_config,
    parse_config_file,
    run_bounds,
    run_fig_alpha,
    run_fig_posterior,
    run_fig_scaling,
    run_fig_shift,
    run_fig_singledraw,
    write_csv,
)

_COMMANDS = ("fig-posterior", "fig-scaling", "fig-shift", "fig-alpha",
             "fig-singledraw", "bounds")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--replicates", type=int, help="replicate count override")
    p.add_argument("--grid", type=int, help="bias grid size override")
    p.add_argument("--threads", type=int, default=1, help="worker threads")


def _parse_list(text: str, cast):
    try:
        values = tuple(cast(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"bad list value {text!r}: {exc}") from None
    if not values:
        raise ConfigError("empty value list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metashift",
        description="Transfer meta-learning simulator and bound evaluator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    descriptions = {
        "fig-posterior": "hyper-prior vs Gibbs posterior on one dataset",
        "fig-scaling": "learner losses against growing task/sample budget",
        "fig-shift": "environment-shift sweep with gap bound",
        "fig-alpha": "source-weight sweep with excess-risk bound",
        "fig-singledraw": "single-draw bound quantiles against task count",
        "bounds": "all bounds on one dataset with term breakdown",
    }
    for name in _COMMANDS:
        p = sub.add_parser(name, help=descriptions[name])
        _add_common(p)
        if name == "fig-scaling":
            p.add_argument("--m-values", help="comma list of per-task sample counts")
        if name == "fig-shift":
            p.add_argument("--r-values", help="comma list of source means in (0,1)")
        if name == "fig-alpha":
            p.add_argument("--alpha-values", help="comma list of source weights")
        if name == "fig-singledraw":
            p.add_argument("--n-values", help="comma list of task counts")
        if name == "bounds":
            p.add_argument("--delta", type=float, help="confidence level")
            p.add_argument("--learner", choices=("emrm", "imrm_gibbs", "constant"))
    return parser


def _resolve_config(args) -> "ExperimentConfig":
    config = default_config(args.command)
    overrides = {}
    if args.config:
        overrides.update(parse_config_file(args.config))
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.replicates is not None:
        overrides["replicates"] = args.replicates
    if args.grid is not None:
        overrides["grid_size"] = args.grid
    if getattr(args, "delta", None) is not None:
        overrides["delta"] = args.delta
    if getattr(args, "learner", None) is not None:
        overrides["learner"] = args.learner
    return apply_overrides(config, overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolve_config(args)
        if args.command == "fig-posterior":
            result = run_fig_posterior(config)
        elif args.command == "fig-scaling":
            m_values = (_parse_list(args.m_values, int)
                        if args.m_values else DEFAULT_M_VALUES)
            result = run_fig_scaling(config, m_values, threads=args.threads)
        elif args.command == "fig-shift":
            r_values = (_parse_list(args.r_values, float)
                        if args.r_values else DEFAULT_R_VALUES)
            result = run_fig_shift(config, r_values, threads=args.threads)
        elif args.command == "fig-alpha":
            alpha_values = (_parse_list(args.alpha_values, float)
                            if args.alpha_values else DEFAULT_ALPHA_VALUES)
            result = run_fig_alpha(config, alpha_values, threads=args.threads)
        elif args.command == "fig-singledraw":
            n_values = (_parse_list(args.n_values, int)
                        if args.n_values else DEFAULT_N_VALUES)
            result = run_fig_singledraw(config, n_values, threads=args.threads)
        else:
            result = run_bounds(config)
        write_csv(result, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
