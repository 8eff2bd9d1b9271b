"""Experiment harness: batch runs, performance profiles, sampling studies, CSV/JSONL output.

Failure cells carry an infinite evaluation count, serialized as the literal
token ``inf``.  A performance-profile curve reports, for each cost ratio
alpha, the fraction of problems a solver realization finished within alpha
times the cheapest realization's cost; problems failed by every realization
are dropped from the denominator.  Wall-clock columns are recorded for
completeness but are machine-dependent and carry no reproducibility claim.
"""

import csv
import dataclasses
import json
import math
import zlib
from dataclasses import dataclass

import numpy as np

from . import drivers
from .objectives import BaseFunction, get_function, make_embedded
from .subspace import estimate_C, sample_gradients


def _name_key(name):
    return zlib.crc32(name.encode("utf-8"))


@dataclass
class ResultRow:
    function: str
    D: int
    algorithm: str
    seed: int
    eval_units: float  # inf on failure
    wall_s: float
    success: bool
    d_est: int


@dataclass
class ResultTable:
    rows: list

    def key_index(self):
        return {(r.function, r.D, r.algorithm, r.seed): r for r in self.rows}

    def validate_complete(self, functions, D_list, algorithms, seeds):
        index = self.key_index()
        for f in functions:
            for D in D_list:
                for a in algorithms:
                    for s in seeds:
                        if (f, D, a, s) not in index:
                            raise ValueError(f"missing suite cell {(f, D, a, s)}")


@dataclass
class ProfileCurve:
    algorithm: str
    seed: int
    alphas: np.ndarray
    pi: np.ndarray


@dataclass
class SamplingStudyResult:
    function: str
    D: int
    max_M: int
    seeds: list
    hits: dict  # seed -> list of bool, index M-1
    min_m: dict  # seed -> int or inf


def _resolve_functions(functions):
    resolved = []
    for f in functions:
        resolved.append(f if isinstance(f, BaseFunction) else get_function(f))
    return resolved


def run_suite(functions, D_list, algorithms, seeds, cfg):
    """Run every (function, D, algorithm, seed) cell and tabulate the outcomes.

    All algorithms see the same embedded instance for a given
    (function, D, seed); failure cells get an infinite evaluation count.
    """
    bases = _resolve_functions(functions)
    for a in algorithms:
        if a not in drivers.ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}")
    if not bases or not D_list or not algorithms or not seeds:
        raise ValueError("empty suite selection")
    rows = []
    for base in bases:
        for D in D_list:
            for seed in seeds:
                obj_entropy = [cfg.seed, _name_key(base.name), D, seed]
                for alg in algorithms:
                    obj = make_embedded(base, D, seed=obj_entropy)
                    run_seed = int(
                        np.random.SeedSequence(obj_entropy + [_name_key(alg)]).generate_state(1)[0]
                    )
                    run_cfg = dataclasses.replace(cfg, algorithm=alg, seed=run_seed)
                    record = drivers.run_algorithm(obj, run_cfg)
                    rows.append(
                        ResultRow(
                            function=base.name,
                            D=D,
                            algorithm=alg,
                            seed=seed,
                            eval_units=float(record.eval_units) if record.success else math.inf,
                            wall_s=record.wall_s,
                            success=bool(record.success),
                            d_est=record.d_est,
                        )
                    )
    table = ResultTable(rows)
    table.validate_complete([b.name for b in bases], D_list, algorithms, seeds)
    return table


PROFILE_GRID_POINTS = 64


def perf_profile(table, metric="evals", allow_single=False):
    """Per-realization performance-profile curves over the problems in a table."""
    if metric not in ("evals", "time"):
        raise ValueError(f"unknown metric {metric!r}")
    algorithms = sorted({r.algorithm for r in table.rows})
    if len(algorithms) < 2 and not allow_single:
        raise ValueError("profiles need at least two algorithms (or allow_single=True)")
    solvers = sorted({(r.algorithm, r.seed) for r in table.rows})
    problems = sorted({(r.function, r.D) for r in table.rows})
    cost = {}
    for r in table.rows:
        if metric == "evals":
            c = r.eval_units
        else:
            c = r.wall_s if r.success else math.inf
        cost[(r.algorithm, r.seed, r.function, r.D)] = c

    ratios = {s: {} for s in solvers}
    kept = []
    for prob in problems:
        costs = [cost.get((a, sd) + prob, math.inf) for (a, sd) in solvers]
        best = min(costs)
        if not math.isfinite(best):
            continue  # every realization failed this problem
        kept.append(prob)
        for s, c in zip(solvers, costs):
            ratios[s][prob] = c / best
    if not kept:
        raise ValueError("every solver failed every problem")

    finite = [r for s in solvers for r in ratios[s].values() if math.isfinite(r)]
    top = max(max(finite), 1.0)
    alphas = np.geomspace(1.0, 2.0 * top, PROFILE_GRID_POINTS)
    curves = []
    for alg, seed in solvers:
        rvals = np.array([ratios[(alg, seed)][p] for p in kept])
        pi = np.array([np.mean(rvals <= a) for a in alphas])
        curves.append(ProfileCurve(algorithm=alg, seed=seed, alphas=alphas, pi=pi))
    return curves


def sampling_study(base, D, max_M, seeds, rho):
    """Smallest sample count at which the estimated dimension hits d_e, per seed.

    Sample points are nested: the estimate at M reuses the first M gradients
    of the seed's stream, so the reported minimum is well defined.  Seeds
    never reaching d_e within max_M are censored with an infinite sentinel.
    """
    if max_M < 1:
        raise ValueError("max_M must be >= 1")
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    base = base if isinstance(base, BaseFunction) else get_function(base)
    hits = {}
    min_m = {}
    for seed in seeds:
        obj = make_embedded(base, D, seed=[seed, D, _name_key(base.name), 0])
        stream = np.random.default_rng(np.random.SeedSequence([seed, D, _name_key(base.name), 1]))
        ens = sample_gradients(obj, max_M, rho, stream, grad_mode="analytic")
        found = []
        first = math.inf
        for M in range(1, max_M + 1):
            est = estimate_C(ens.prefix(M))
            hit = est.d == base.d_e
            found.append(hit)
            if hit and not math.isfinite(first):
                first = M
        hits[seed] = found
        min_m[seed] = first
    return SamplingStudyResult(function=base.name, D=D, max_M=max_M, seeds=list(seeds), hits=hits, min_m=min_m)


def _fmt_units(v):
    if math.isinf(v):
        return "inf"
    return repr(int(v)) if float(v).is_integer() else repr(float(v))


def emit(obj, path, format="csv"):
    """Write a table, profile list, or sampling study to disk.

    CSV columns are stable: result tables use
    ``function,D,algorithm,seed,eval_units,wall_s,success,d_est`` and profile
    curves use ``algorithm,seed,alpha,pi``; ``structured-records`` writes one
    schema-versioned JSON object per line instead.
    """
    if format not in ("csv", "structured-records"):
        raise ValueError(f"unknown format {format!r}")
    try:
        with open(path, "w", newline="") as fh:
            if isinstance(obj, ResultTable):
                _emit_table(obj, fh, format)
            elif isinstance(obj, SamplingStudyResult):
                _emit_sampling(obj, fh, format)
            elif isinstance(obj, (list, tuple)) and all(isinstance(c, ProfileCurve) for c in obj):
                _emit_profiles(obj, fh, format)
            else:
                raise ValueError(f"cannot emit object of type {type(obj).__name__}")
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc


def _emit_table(table, fh, format):
    if format == "csv":
        w = csv.writer(fh)
        w.writerow(["function", "D", "algorithm", "seed", "eval_units", "wall_s", "success", "d_est"])
        for r in table.rows:
            w.writerow(
                [r.function, r.D, r.algorithm, r.seed, _fmt_units(r.eval_units), repr(r.wall_s), int(r.success), r.d_est]
            )
    else:
        for r in table.rows:
            fh.write(json.dumps({"schema": 1, **dataclasses.asdict(r)}) + "\n")


def _emit_profiles(curves, fh, format):
    if format == "csv":
        w = csv.writer(fh)
        w.writerow(["algorithm", "seed", "alpha", "pi"])
        for c in curves:
            for a, p in zip(c.alphas, c.pi):
                w.writerow([c.algorithm, c.seed, repr(float(a)), repr(float(p))])
    else:
        for c in curves:
            fh.write(
                json.dumps(
                    {
                        "schema": 1,
                        "algorithm": c.algorithm,
                        "seed": c.seed,
                        "alpha": [float(a) for a in c.alphas],
                        "pi": [float(p) for p in c.pi],
                    }
                )
                + "\n"
            )


def _emit_sampling(study, fh, format):
    if format == "csv":
        w = csv.writer(fh)
        w.writerow(["function", "D", "seed", "M", "found_dim", "min_m"])
        for seed in study.seeds:
            for M, hit in enumerate(study.hits[seed], start=1):
                w.writerow([study.function, study.D, seed, M, int(hit), _fmt_units(study.min_m[seed])])
    else:
        for seed in study.seeds:
            fh.write(
                json.dumps(
                    {
                        "schema": 1,
                        "function": study.function,
                        "D": study.D,
                        "seed": seed,
                        "hits": [bool(h) for h in study.hits[seed]],
                        "min_m": None if math.isinf(study.min_m[seed]) else study.min_m[seed],
                    }
                )
                + "\n"
            )


def _parse_units(tok):
    if tok == "inf":
        return math.inf
    return float(tok)


def read_result_table(path):
    """Parse a result-table CSV back; inverse of ``emit(..., format='csv')``."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            rows.append(
                ResultRow(
                    function=rec["function"],
                    D=int(rec["D"]),
                    algorithm=rec["algorithm"],
                    seed=int(rec["seed"]),
                    eval_units=_parse_units(rec["eval_units"]),
                    wall_s=float(rec["wall_s"]),
                    success=bool(int(rec["success"])),
                    d_est=int(rec["d_est"]),
                )
            )
    return ResultTable(rows)


def read_profiles(path):
    """Parse profile-curve CSV back into ProfileCurve objects."""
    points = {}
    order = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            key = (rec["algorithm"], int(rec["seed"]))
            if key not in points:
                points[key] = ([], [])
                order.append(key)
            points[key][0].append(float(rec["alpha"]))
            points[key][1].append(float(rec["pi"]))
    return [
        ProfileCurve(algorithm=k[0], seed=k[1], alphas=np.array(v[0]), pi=np.array(v[1]))
        for k, v in ((k, points[k]) for k in order)
    ]


def write_run_records(records, path):
    """One schema-versioned JSON object per run, line-delimited."""
    try:
        with open(path, "w") as fh:
            for record in records:
                fh.write(json.dumps(record.to_dict()) + "\n")
    except OSError as exc:
        raise OSError(f"failed writing {path}: {exc}") from exc
