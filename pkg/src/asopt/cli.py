"""Command-line interface.

Subcommands: ``run`` (one algorithm on one embedded function), ``suite``
(batch grid, CSV table), ``profile`` (performance profiles from a table),
``sampling`` (minimum sample count study), ``bounds`` (sampling-complexity
calculators) and ``list-functions``.  Exit code 0 on success, nonzero on
rejected input or I/O failure.
"""

import argparse
import csv
import json
import sys

from . import bench, drivers, subspace
from .objectives import alpha_easom, catalogue, get_function, make_embedded
from .solver import SolverOptions


def _add_common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--out", type=str, default=None, help="output path (default: stdout)")
    p.add_argument("--grad", choices=("analytic", "fd"), default="analytic", help="gradient sampling mode")
    p.add_argument("--dim", type=int, default=100, help="ambient dimension D")
    p.add_argument("--eps", type=float, default=1e-3, help="success tolerance on the objective value")


def _add_solver(p):
    p.add_argument("--starts", type=int, default=None, help="multistart budget (default min(200, 10 d))")
    p.add_argument("--grad-tol", type=float, default=1e-8, help="gradient-norm stop tolerance")
    p.add_argument("--start-range", type=float, default=1.0, help="half-width of the start box")


def _solver_options(args):
    return SolverOptions(
        n_starts=args.starts,
        start_box_halfwidth=args.start_range,
        grad_tol=args.grad_tol,
    )


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def build_parser():
    parser = argparse.ArgumentParser(prog="asopt", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-functions", help="dump the function catalogue as CSV")
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("run", help="run one algorithm on one embedded function")
    _add_common(p)
    _add_solver(p)
    p.add_argument("--func", required=True, help="catalogue function name, e.g. branin")
    p.add_argument("--algorithm", required=True, choices=drivers.ALGORITHMS)
    p.add_argument("--samples", type=int, default=None, help="asm_1 sample count / rego_1 dimension (default d_e)")

    p = sub.add_parser("suite", help="run a grid of (function, D, algorithm, seed) cells")
    _add_common(p)
    _add_solver(p)
    p.add_argument("--config", type=str, default=None, help="JSON suite definition")
    p.add_argument("--functions", type=str, default=None, help="comma-separated names")
    p.add_argument("--algorithms", type=str, default=None, help="comma-separated algorithms")
    p.add_argument("--dims", type=str, default=None, help="comma-separated ambient dimensions")
    p.add_argument("--seeds", type=str, default=None, help="comma-separated seeds")

    p = sub.add_parser("profile", help="performance profiles from a result table")
    p.add_argument("--results", required=True, help="CSV produced by the suite subcommand")
    p.add_argument("--metric", choices=("evals", "time"), default="evals")
    p.add_argument("--allow-single", action="store_true", help="permit a single-algorithm table")
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("sampling", help="minimum sample count for recovering the effective dimension")
    _add_common(p)
    p.add_argument("--func", required=True)
    p.add_argument("--alpha", type=float, default=None, help="peak-width parameter for the easom family")
    p.add_argument("--max-samples", type=int, default=30)
    p.add_argument("--n-seeds", type=int, default=5)

    p = sub.add_parser("bounds", help="sampling-complexity calculators as a labeled CSV row")
    p.add_argument("--lambda1", type=float, required=True)
    p.add_argument("--lambda-de", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.add_argument("--de", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.01, help="failure probability for the sample bound")
    p.add_argument("--xi", type=float, default=0.9, help="target success probability")
    p.add_argument("--gamma", type=float, default=1.0, help="per-solve success probability")
    p.add_argument("--out", type=str, default=None)

    return parser


def _cmd_list_functions(args):
    fh = _open_out(args.out)
    w = csv.writer(fh)
    w.writerow(["name", "d_e", "domain", "f_star"])
    for base in catalogue():
        domain = "|".join(f"[{lo:g},{hi:g}]" for lo, hi in zip(base.lower, base.upper))
        w.writerow([base.name, base.d_e, domain, repr(base.f_star)])
    if fh is not sys.stdout:
        fh.close()
    return 0


def _cmd_run(args):
    base = get_function(args.func)
    obj = make_embedded(base, args.dim, seed=args.seed)
    cfg = drivers.AlgorithmConfig(
        algorithm=args.algorithm,
        grad_mode=args.grad,
        eps=args.eps,
        M=args.samples,
        solver=_solver_options(args),
        seed=args.seed,
    )
    record = drivers.run_algorithm(obj, cfg)
    if args.out:
        bench.write_run_records([record], args.out)
    print(
        f"{record.algorithm} {record.function} D={record.D} f_opt={record.f_opt:.6g} "
        f"d_est={record.d_est} success={record.success} units={record.eval_units} "
        f"reason={record.termination_reason}"
    )
    return 0


def _cmd_suite(args):
    conf = {}
    if args.config:
        with open(args.config) as fh:
            conf = json.load(fh)

    def pick(flag, key, default=None, split=None):
        if flag is not None:
            return flag.split(",") if split else flag
        return conf.get(key, default)

    functions = pick(args.functions, "functions", split=True)
    algorithms = pick(args.algorithms, "algorithms", split=True)
    dims = pick(args.dims, "dims", [100], split=True)
    seeds = pick(args.seeds, "seeds", [0, 1, 2], split=True)
    if not functions or not algorithms:
        raise ValueError("suite needs functions and algorithms (flags or config file)")
    dims = [int(v) for v in dims]
    seeds = [int(v) for v in seeds]
    solver_conf = conf.get("solver", {})
    solver = SolverOptions(
        n_starts=solver_conf.get("starts", args.starts),
        start_box_halfwidth=solver_conf.get("start_range", args.start_range),
        grad_tol=solver_conf.get("grad_tol", args.grad_tol),
    )
    cfg = drivers.AlgorithmConfig(
        grad_mode=conf.get("grad", args.grad),
        eps=conf.get("eps", args.eps),
        M=conf.get("samples", None),
        solver=solver,
        seed=conf.get("seed", args.seed),
    )
    table = bench.run_suite(functions, dims, algorithms, seeds, cfg)
    if args.out:
        bench.emit(table, args.out, format="csv")
    else:
        bench._emit_table(table, sys.stdout, "csv")
    return 0


def _cmd_profile(args):
    table = bench.read_result_table(args.results)
    curves = bench.perf_profile(table, metric=args.metric, allow_single=args.allow_single)
    if args.out:
        bench.emit(curves, args.out, format="csv")
    else:
        bench._emit_profiles(curves, sys.stdout, "csv")
    return 0


def _cmd_sampling(args):
    if args.alpha is not None:
        base = alpha_easom(args.alpha)
    else:
        base = get_function(args.func)
    rho = subspace.standard_normal()
    study = bench.sampling_study(base, args.dim, args.max_samples, args.n_seeds, rho)
    if args.out:
        bench.emit(study, args.out, format="csv")
    else:
        bench._emit_sampling(study, sys.stdout, "csv")
    return 0


def _cmd_bounds(args):
    M = subspace.sampling_lower_bound(args.lambda1, args.lambda_de, args.L, args.de, 0.0, args.alpha)
    M0 = subspace.m_zero(args.lambda1, args.lambda_de, args.L, args.de)
    tau = subspace.tau_const(args.lambda1, args.lambda_de, args.L)
    Kxi = subspace.k_xi(args.xi, tau, args.gamma, M0)
    fh = _open_out(args.out)
    w = csv.writer(fh)
    w.writerow(["M", "M0", "tau", "K_xi"])
    w.writerow([repr(M), M0, repr(tau), Kxi])
    if fh is not sys.stdout:
        fh.close()
    return 0


_COMMANDS = {
    "list-functions": _cmd_list_functions,
    "run": _cmd_run,
    "suite": _cmd_suite,
    "profile": _cmd_profile,
    "sampling": _cmd_sampling,
    "bounds": _cmd_bounds,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
