"""Command-line front door for solves, sweeps and experiments.

Commands
--------
solve            run the first configured solver on the configured problem
experiment       run every configured solver; write summary + traces
rate-table       spectral radii over the delta grid and three step rules
design-rate R    print the mix-in weight and step achieving rate 1/R
region           admissibility slack grid for the primal-dual step pair
validate-config  check parameter boxes without running

Exit codes: 0 success, 2 malformed config or bad input (diagnostic names
the offending field), 3 divergence (partial trace CSV path printed).
Outputs land in --out, defaulting to ./results/<command>-<timestamp>;
--deterministic drops the timestamp so reruns overwrite byte-identical
files (timing columns aside).
"""

import argparse
import json
import os
import sys
import time

from .experiments import (config_from_dict, run_benchmark, run_solver,
                          summary_header, summary_row, validate_config,
                          generate)
from .primal_dual import region_grid
from .rate_analysis import design_rate, rate_table
from .splitting import DivergenceError


def _out_dir(args, command):
    if args.out is not None:
        path = args.out
    elif args.deterministic:
        path = os.path.join("results", command)
    else:
        stamp = time.strftime("%Y%m%d-%H%M%S")
        path = os.path.join("results", f"{command}-{stamp}")
    os.makedirs(path, exist_ok=True)
    return path


def _load_config(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ValueError(f"config file {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValueError(f"config file {path!r}: invalid JSON ({exc})") \
            from exc
    return config_from_dict(raw)


def _cmd_validate_config(args):
    cfg = _load_config(args.config)
    validate_config(cfg)
    print(f"config ok: problem={cfg.problem}, solvers={list(cfg.solvers)}")
    return 0


def _cmd_solve(args):
    cfg = _load_config(args.config)
    validate_config(cfg)
    out = _out_dir(args, "solve")
    instance = generate(cfg)
    solver = cfg.solvers[0]
    try:
        result = run_solver(instance, solver, cfg)
    except DivergenceError as exc:
        path = os.path.join(out, f"{solver}_trace.csv")
        exc.trace.to_csv(path)
        print(f"divergence: {exc}; partial trace at {path}")
        return 3
    result.trace.to_csv(os.path.join(out, f"{solver}_trace.csv"))
    with open(os.path.join(out, "summary.csv"), "w") as fh:
        fh.write(summary_header() + "\n")
        fh.write(summary_row(result) + "\n")
    status = "converged" if result.converged else "stopped"
    print(f"{solver} on {cfg.problem}: {status} after {result.iterations} "
          f"iterations, final err {result.final_err:.6g}; outputs in {out}")
    return 0


def _cmd_experiment(args):
    cfg = _load_config(args.config)
    if args.name is not None:
        cfg.problem = args.name
    validate_config(cfg)
    out = _out_dir(args, "experiment")
    try:
        results = run_benchmark(cfg, out_dir=out)
    except DivergenceError as exc:
        path = os.path.join(out, "diverged_trace.csv")
        exc.trace.to_csv(path)
        print(f"divergence: {exc}; partial trace at {path}")
        return 3
    print(summary_header())
    for res in results:
        print(summary_row(res))
    print(f"outputs in {out}")
    return 0


def _cmd_rate_table(args):
    out = _out_dir(args, "rate-table")
    path = os.path.join(out, "rate_table.csv")
    with open(path, "w") as fh:
        fh.write("delta,lambda_rule,rho\n")
        for delta, label, _lam, rho in rate_table():
            fh.write(f"{delta:.17g},{label},{rho:.17g}\n")
    print(f"rate table written to {path}")
    return 0


def _cmd_design_rate(args):
    design = design_rate(args.r)
    print(f"r: {design.r:.17g}")
    print(f"delta: {design.delta:.17g}")
    print(f"lambda: {design.lam:.17g}")
    roots = ", ".join(f"{z:.17g}" for z in design.roots)
    print(f"roots: {roots}")
    return 0


def _cmd_region(args):
    out = _out_dir(args, "region")
    path = os.path.join(out, "region.csv")
    taus, sigmas, slack = region_grid(args.b, args.L, args.normK,
                                      n=args.grid)
    with open(path, "w") as fh:
        fh.write("tau,sigma,admissible,slack\n")
        for i, tau in enumerate(taus):
            for j, sigma in enumerate(sigmas):
                s = slack[i, j]
                fh.write(f"{tau:.17g},{sigma:.17g},{int(s > 0.0)},"
                         f"{s:.17g}\n")
    print(f"admissibility grid written to {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="monosplit",
        description="Operator-splitting solvers for monotone inclusions")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", default=None,
                       help="output directory (default "
                            "./results/<command>-<timestamp>)")
        p.add_argument("--deterministic", action="store_true",
                       help="drop the timestamp from the default "
                            "output directory")

    p = sub.add_parser("solve", help="run the first configured solver")
    p.add_argument("--config", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("experiment", help="run every configured solver")
    p.add_argument("name", nargs="?", default=None,
                   help="problem name overriding the config")
    p.add_argument("--config", required=True)
    add_common(p)
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("rate-table",
                       help="spectral radii over the delta grid")
    add_common(p)
    p.set_defaults(func=_cmd_rate_table)

    p = sub.add_parser("design-rate",
                       help="mix-in weight and step for a target rate")
    p.add_argument("r", type=float)
    p.set_defaults(func=_cmd_design_rate)

    p = sub.add_parser("region", help="admissibility slack grid")
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--normK", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=200)
    add_common(p)
    p.set_defaults(func=_cmd_region)

    p = sub.add_parser("validate-config",
                       help="check parameter boxes without running")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_validate_config)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
