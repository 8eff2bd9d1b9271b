"""Estimation of the subspace the objective varies along, plus sampling bounds.

The second-moment matrix of sampled gradients is eigendecomposed either
directly (moderate D) or through the M x M Gram matrix of the gradient
ensemble (large D); the two routes share their nonzero spectrum.  The bound
calculators quantify how many gradient samples guarantee that the estimated
subspace captures every direction of variation with a given probability.
They assume a sampling density supported on the whole space; box densities
are accepted but carry no such guarantee.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import linops
from .linops import OrthonormalBasis
from .objectives import make_embedded

GRAM_ROUTE_DIM = 500


@dataclass
class SamplingDistribution:
    """Either the standard normal on R^D or the uniform law on a box."""

    kind: str
    box: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("standard_normal", "uniform"):
            raise ValueError(f"unknown sampling distribution {self.kind!r}")
        if self.kind == "uniform":
            if self.box is None:
                raise ValueError("uniform sampling needs a box")
            lo = np.atleast_1d(np.asarray(self.box[0], dtype=float))
            hi = np.atleast_1d(np.asarray(self.box[1], dtype=float))
            if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
                raise ValueError("box bounds must be finite")
            if np.any(hi <= lo):
                raise ValueError("box upper bounds must exceed lower bounds")
            self.box = (lo, hi)

    def sample(self, rng, D, n=None):
        """One point of dimension D, or an (n, D) block when n is given."""
        shape = (D,) if n is None else (n, D)
        if self.kind == "standard_normal":
            return rng.standard_normal(shape)
        lo, hi = self.box
        if lo.size not in (1, D):
            raise ValueError(f"box has {lo.size} coordinates, expected {D}")
        return rng.uniform(np.broadcast_to(lo, shape[-1:]), np.broadcast_to(hi, shape[-1:]), size=shape)


def standard_normal():
    return SamplingDistribution("standard_normal")


def uniform_box(lo, hi):
    return SamplingDistribution("uniform", box=(lo, hi))


@dataclass
class GradientEnsemble:
    points: np.ndarray  # (M, D)
    gradients: np.ndarray  # (M, D)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        self.gradients = np.asarray(self.gradients, dtype=float)
        if self.points.shape != self.gradients.shape or self.points.ndim != 2:
            raise ValueError("points and gradients must be matching (M, D) arrays")
        if self.M < 1:
            raise ValueError("an ensemble needs at least one sample")

    @property
    def M(self):
        return self.points.shape[0]

    def prefix(self, m):
        return GradientEnsemble(self.points[:m], self.gradients[:m])


@dataclass
class ActiveSubspaceEstimate:
    eigenvalues: np.ndarray  # length min(M, D), descending
    d: int
    basis: OrthonormalBasis
    M: int


def sample_gradients(obj, M, rho, rng, grad_mode="analytic"):
    """Draw M points from rho and record the objective gradient at each."""
    if M < 1:
        raise ValueError("M must be >= 1")
    if grad_mode not in ("analytic", "fd"):
        raise ValueError(f"unknown gradient mode {grad_mode!r}")
    grad = obj.grad_analytic if grad_mode == "analytic" else obj.grad_fd
    points = rho.sample(rng, obj.D, n=M)
    grads = np.empty_like(points)
    for j in range(M):
        grads[j] = grad(points[j])
    return GradientEnsemble(points, grads)


def estimate_C(ens, route=None):
    """Eigenstructure of the sampled gradient second-moment matrix.

    ``route`` picks where the eigenvalues come from: the direct D x D
    eigendecomposition for D <= 500, the M x M Gram matrix of the ensemble
    beyond (the nonzero spectra coincide).  The basis is always assembled
    from combinations of the sampled gradients, which keeps its columns
    inside the span of the gradients even when trailing eigenvalues sit
    barely above the rank threshold; direct-route eigenvectors of such
    eigenvalues would leak into the nullspace.  An all-zero ensemble yields
    rank zero and an empty basis.
    """
    G = ens.gradients.T  # (D, M)
    D, M = G.shape
    k = min(M, D)
    if route is None:
        route = "direct" if D <= GRAM_ROUTE_DIM else "gram"
    if route not in ("direct", "gram"):
        raise ValueError(f"unknown route {route!r}")
    K = (G.T @ G) / M
    gram_spec = linops.sym_eig(K)
    if route == "direct":
        C = (G @ G.T) / M
        lam = linops.sym_eig(C).eigenvalues[:k]
    else:
        lam = gram_spec.eigenvalues[:k]
    d = linops.numeric_rank(lam, D)
    if d > 0:
        cols, _ = np.linalg.qr(G @ gram_spec.eigenvectors[:, :d])
        basis = OrthonormalBasis(cols)
    else:
        basis = OrthonormalBasis.empty(D)
    return ActiveSubspaceEstimate(eigenvalues=lam, d=d, basis=basis, M=M)


def basis_for_rp(est):
    """Embedding basis for the reduced problem; empty when the estimate is rank zero."""
    return est.basis


def sampling_lower_bound(lambda1, lambdak, L, k, tau, alpha):
    """Samples guaranteeing the k-th estimated eigenvalue clears tau times the true one."""
    if not lambda1 >= lambdak > 0:
        raise ValueError("need lambda1 >= lambdak > 0")
    if L <= 0:
        raise ValueError("L must be positive")
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 <= tau < 1:
        raise ValueError("tau must lie in [0, 1)")
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return 4.0 * lambda1 * L**2 / (lambdak**2 * (1.0 - tau) ** 2) * math.log(k / alpha)


def m_zero(lambda1, lambda_de, L, d_e):
    """Sample count from which the per-iteration subspace-success floor applies."""
    if not lambda1 >= lambda_de > 0:
        raise ValueError("need lambda1 >= lambda_de > 0")
    if L <= 0:
        raise ValueError("L must be positive")
    if d_e < 1:
        raise ValueError("d_e must be >= 1")
    return math.ceil(4.0 * lambda1 * L**2 / lambda_de**2 * math.log(d_e)) + 1


def tau_const(lambda1, lambda_de, L):
    """Per-iteration lower bound on the probability the reduced problem is exact."""
    if not lambda1 >= lambda_de > 0:
        raise ValueError("need lambda1 >= lambda_de > 0")
    if L <= 0:
        raise ValueError("L must be positive")
    return 1.0 - math.exp(-(lambda_de**2) / (4.0 * lambda1 * L**2))


def k_xi(xi, tau, gamma, M0):
    """Iterations after which the incumbent is near-optimal with probability >= xi."""
    if not 0 <= xi < 1:
        raise ValueError("xi must lie in [0, 1)")
    if not 0 < tau < 1:
        raise ValueError("tau must lie in (0, 1)")
    if not 0 < gamma <= 1:
        raise ValueError("gamma must lie in (0, 1]")
    if M0 < 1:
        raise ValueError("M0 must be >= 1")
    return math.ceil(abs(math.log(1.0 - xi)) / (tau * gamma)) + M0 - 1


def success_floor(K, tau, gamma, M0):
    """Lower bound on the probability that K iterations produce a near-optimal incumbent."""
    if K < M0:
        raise ValueError("K must be >= M0")
    return 1.0 - (1.0 - tau * gamma) ** (K - M0 + 1)


def empirical_rank_probability(base, D, M, trials, rho, rng):
    """Monte-Carlo estimate of P[estimated subspace dimension equals d_e].

    Each trial lifts the base function behind a fresh rotation, samples M
    gradients from rho and checks the numeric rank of the estimate.  For
    1-d bases exposing an elementwise derivative the trials vectorize: a
    1 x 1 second-moment matrix has rank one exactly when any sampled
    derivative is nonzero, and the sign ambiguity of the 1-d rotation
    cannot change whether a derivative vanishes.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if D == 1 and base.d_e == 1 and base.grad_elementwise is not None:
        X = rho.sample(rng, 1, n=trials * M).reshape(trials, M)
        derivs = base.grad_elementwise(X)
        hits = np.any(derivs != 0.0, axis=1)
        return float(np.mean(hits))
    hits = 0
    seeds = rng.integers(0, 2**63 - 1, size=(trials, 2))
    for t in range(trials):
        obj = make_embedded(base, D, seed=int(seeds[t, 0]))
        trial_rng = np.random.default_rng(int(seeds[t, 1]))
        ens = sample_gradients(obj, M, rho, trial_rng, grad_mode="analytic")
        est = estimate_C(ens)
        hits += est.d == base.d_e
    return hits / trials
