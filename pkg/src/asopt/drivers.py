"""The six optimization drivers.

Four of them estimate or grow an embedding subspace before each reduced
solve (adaptive and single-shot variants, subspace learned from sampled
gradients or drawn at random); ``no_embedding`` solves the full-space
problem directly.  Every driver keeps the incumbent at the best point found
so far: a subproblem result that is worse than the incumbent is discarded,
so the recorded best-value trace is non-increasing by construction.
"""

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import subspace as sub
from .linops import OrthonormalBasis, gaussian_matrix, gram_schmidt_append
from .solver import ReducedProblem, SolverOptions, multistart_minimize

ALGORITHMS = ("asm_go", "a_asm", "asm_1", "a_rego", "rego_1", "no_embedding")

# stream labels for per-purpose child generators
_SAMPLING, _STARTS, _EMBEDDING = 1, 2, 3


def child_rng(seed, *key):
    """Independent generator derived from an integer seed and a key tuple."""
    entropy = [int(seed) & 0xFFFFFFFF] + [int(k) for k in key]
    return np.random.default_rng(np.random.SeedSequence(entropy))


@dataclass
class AlgorithmConfig:
    algorithm: str = "a_asm"
    grad_mode: str = "analytic"
    rho: sub.SamplingDistribution = field(default_factory=sub.standard_normal)
    p0: Optional[np.ndarray] = None
    eps: float = 1e-3
    stagnation_gamma: float = 1e-5
    gs_tol: float = 1e-6
    gs_patience: int = 5
    max_embeddings: Optional[int] = None
    M: Optional[int] = None  # samples for asm_1 / embedding dimension for rego_1
    solver: SolverOptions = field(default_factory=SolverOptions)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.grad_mode not in ("analytic", "fd"):
            raise ValueError(f"unknown gradient mode {self.grad_mode!r}")
        if min(self.eps, self.stagnation_gamma, self.gs_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.gs_patience < 1:
            raise ValueError("gs_patience must be >= 1")
        if self.M is not None and self.M < 1:
            raise ValueError("M must be >= 1")


@dataclass
class TraceEntry:
    k: int
    d_k: int
    f_k: float
    f_best: float
    eval_units: int
    wall_ms: float


@dataclass
class RunRecord:
    algorithm: str
    function: Optional[str]
    D: int
    seed: int
    trace: list
    x_opt: np.ndarray
    f_opt: float
    d_est: int
    success: Optional[bool]
    termination_reason: str
    eval_units: int
    wall_s: float

    def to_dict(self):
        return {
            "schema": 1,
            "algorithm": self.algorithm,
            "function": self.function,
            "D": self.D,
            "seed": self.seed,
            "d_est": self.d_est,
            "f_opt": self.f_opt,
            "success": self.success,
            "termination_reason": self.termination_reason,
            "eval_units": self.eval_units,
            "wall_s": self.wall_s,
            "trace": [
                {
                    "k": e.k,
                    "d_k": e.d_k,
                    "f_k": e.f_k,
                    "f_best": e.f_best,
                    "eval_units": e.eval_units,
                    "wall_ms": e.wall_ms,
                }
                for e in self.trace
            ],
            "x_opt": [float(v) for v in self.x_opt],
        }


class _RunState:
    """Incumbent bookkeeping shared by all drivers."""

    def __init__(self, obj, cfg):
        self.obj = obj
        self.cfg = cfg
        self.units0 = obj.accounting.total_units
        self.t0 = time.perf_counter()
        p0 = np.zeros(obj.D) if cfg.p0 is None else np.asarray(cfg.p0, dtype=float)
        self.x_best = p0
        self.f_best = obj.eval(p0)
        self.trace = []

    @property
    def p(self):
        return self.x_best

    def record(self, k, d_k, x_candidate):
        """Score a candidate (or nothing), update the incumbent, append a trace row.

        The trace keeps the raw value each embedding achieved (stagnation
        rules compare those); the incumbent only ever moves to strictly
        better points, so the recorded best-so-far column is non-increasing.
        """
        if x_candidate is not None:
            f_cand = self.obj.eval(x_candidate)
            if f_cand < self.f_best:
                self.x_best = np.asarray(x_candidate, dtype=float)
                self.f_best = f_cand
            f_k = f_cand
        else:
            f_k = self.f_best
        self.trace.append(
            TraceEntry(
                k=k,
                d_k=d_k,
                f_k=f_k,
                f_best=self.f_best,
                eval_units=self.obj.accounting.total_units - self.units0,
                wall_ms=(time.perf_counter() - self.t0) * 1000.0,
            )
        )
        return f_k

    def finish(self, d_est, reason):
        obj, cfg = self.obj, self.cfg
        f_star = getattr(obj, "f_star", None)
        success = None
        if f_star is not None and np.isfinite(f_star):
            success = bool(self.f_best <= f_star + cfg.eps)
        return RunRecord(
            algorithm=cfg.algorithm,
            function=getattr(getattr(obj, "base", None), "name", None),
            D=obj.D,
            seed=cfg.seed,
            trace=self.trace,
            x_opt=self.x_best,
            f_opt=self.f_best,
            d_est=int(d_est),
            success=success,
            termination_reason=reason,
            eval_units=obj.accounting.total_units - self.units0,
            wall_s=time.perf_counter() - self.t0,
        )


def _solve_embedding(state, A, k):
    """Multistart solve of the reduced problem anchored at the incumbent."""
    rp = ReducedProblem(state.obj, A, state.p)
    report = multistart_minimize(rp, state.cfg.solver, child_rng(state.cfg.seed, _STARTS, k))
    return rp.lift(report.y_best) if rp.d > 0 else None


def asm_go(obj, cfg):
    """Re-estimate the gradient subspace from k fresh samples at iteration k.

    Stops once the estimated dimension has not changed over gs_patience
    consecutive iterations, or at the embedding cap.
    """
    state = _RunState(obj, cfg)
    cap = cfg.max_embeddings or obj.D
    d_hist = deque(maxlen=cfg.gs_patience)
    d_k = 0
    reason = "max_embeddings"
    for k in range(1, cap + 1):
        ens = sub.sample_gradients(obj, k, cfg.rho, child_rng(cfg.seed, _SAMPLING, k), cfg.grad_mode)
        est = sub.estimate_C(ens)
        d_k = est.d
        if d_k > 0:
            x = _solve_embedding(state, est.basis.columns, k)
            state.record(k, d_k, x)
        else:
            state.record(k, 0, None)
        d_hist.append(d_k)
        if len(d_hist) == cfg.gs_patience and min(d_hist) == max(d_hist):
            reason = "basis_stalled"
            break
    return state.finish(d_k, reason)


def a_asm(obj, cfg):
    """Grow an orthonormal gradient basis one sample per iteration.

    A new gradient is appended through Gram-Schmidt when its residual clears
    gs_tol; the run stops after gs_patience consecutive rejections (or a
    full-dimensional basis), and the reached basis dimension is the
    effective-dimension estimate.
    """
    state = _RunState(obj, cfg)
    cap = cfg.max_embeddings or obj.D
    grad = obj.grad_analytic if cfg.grad_mode == "analytic" else obj.grad_fd
    stream = child_rng(cfg.seed, _SAMPLING)
    g = None
    for _ in range(100):
        x_s = cfg.rho.sample(stream, obj.D)
        g = grad(x_s)
        if np.linalg.norm(g) > 0:
            break
    if g is None or np.linalg.norm(g) == 0:
        state.record(1, 0, None)
        return state.finish(0, "basis_stalled")
    basis = OrthonormalBasis((g / np.linalg.norm(g))[:, None])
    residuals = deque(maxlen=cfg.gs_patience)
    reason = "max_embeddings"
    for k in range(1, cap + 1):
        if k > 1:
            g = grad(cfg.rho.sample(stream, obj.D))
            basis, _, rn = gram_schmidt_append(basis, g, cfg.gs_tol)
            residuals.append(rn)
        x = _solve_embedding(state, basis.columns, k)
        state.record(k, basis.dim, x)
        if len(residuals) == cfg.gs_patience and max(residuals) < cfg.gs_tol:
            reason = "basis_stalled"
            break
        if basis.dim >= obj.D:
            reason = "basis_stalled"
            break
    return state.finish(basis.dim, reason)


def asm_1(obj, M, cfg, basis=None):
    """Single-shot variant: one subspace estimate from M gradient samples, one solve.

    ``basis`` overrides the estimation step with a known embedding (columns of
    a D x d matrix), which turns the driver into the exact-subspace oracle.
    """
    if basis is None and M < 1:
        raise ValueError("M must be >= 1")
    state = _RunState(obj, cfg)
    if basis is None:
        ens = sub.sample_gradients(obj, M, cfg.rho, child_rng(cfg.seed, _SAMPLING, 1), cfg.grad_mode)
        est = sub.estimate_C(ens)
        columns = est.basis.columns
        d = est.d
    else:
        columns = np.asarray(basis, dtype=float)
        d = columns.shape[1]
    if d > 0:
        x = _solve_embedding(state, columns, 1)
        state.record(1, d, x)
    else:
        state.record(1, 0, None)
    return state.finish(d, "single_shot")


def a_rego(obj, cfg):
    """Random-embedding baseline with growing dimension d_k = k.

    Stops at the first k >= 2 whose recorded value stagnates against the
    previous iteration, estimating the effective dimension as k - 1.
    """
    state = _RunState(obj, cfg)
    cap = min(cfg.max_embeddings or obj.D, obj.D)
    f_prev = None
    reason = "max_embeddings"
    d_est = None
    k_last = 0
    for k in range(1, cap + 1):
        k_last = k
        A = gaussian_matrix(obj.D, k, child_rng(cfg.seed, _EMBEDDING, k))
        x = _solve_embedding(state, A, k)
        f_k = state.record(k, k, x)
        if f_prev is not None and abs(f_k - f_prev) <= cfg.stagnation_gamma:
            reason = "stagnation"
            d_est = k - 1
            break
        f_prev = f_k
    if d_est is None:
        d_est = obj.D if k_last >= obj.D else k_last
    return state.finish(d_est, reason)


def rego_1(obj, d, cfg):
    """Single-shot random embedding of a user-chosen dimension."""
    if d < 1:
        raise ValueError("embedding dimension must be >= 1")
    state = _RunState(obj, cfg)
    A = gaussian_matrix(obj.D, d, child_rng(cfg.seed, _EMBEDDING, 1))
    x = _solve_embedding(state, A, 1)
    state.record(1, d, x)
    return state.finish(d, "single_shot")


def no_embedding(obj, cfg):
    """Multistart solve of the original problem in the full space."""
    state = _RunState(obj, cfg)
    A = np.eye(obj.D)
    rp = ReducedProblem(obj, A, np.zeros(obj.D))
    report = multistart_minimize(rp, cfg.solver, child_rng(cfg.seed, _STARTS, 1))
    state.record(1, obj.D, rp.lift(report.y_best))
    return state.finish(obj.D, "single_shot")


def run_algorithm(obj, cfg):
    """Dispatch on cfg.algorithm; cfg.M defaults to the objective's known d_e."""
    if cfg.algorithm == "asm_go":
        return asm_go(obj, cfg)
    if cfg.algorithm == "a_asm":
        return a_asm(obj, cfg)
    if cfg.algorithm == "asm_1":
        M = cfg.M if cfg.M is not None else obj.d_e
        return asm_1(obj, M, cfg)
    if cfg.algorithm == "a_rego":
        return a_rego(obj, cfg)
    if cfg.algorithm == "rego_1":
        d = cfg.M if cfg.M is not None else obj.d_e
        return rego_1(obj, d, cfg)
    if cfg.algorithm == "no_embedding":
        return no_embedding(obj, cfg)
    raise ValueError(f"unknown algorithm {cfg.algorithm!r}")


def check_success(record, f_star, eps):
    """Value-level success: the recorded optimum reaches f_star + eps (inclusive)."""
    return bool(record.f_opt <= f_star + eps)
