"""Dense linear-algebra primitives shared across the toolkit."""

from dataclasses import dataclass

import numpy as np

from . import kernels

ORTHONORMALITY_TOL = 1e-10


@dataclass
class OrthonormalBasis:
    """A D x d matrix with orthonormal columns; d = 0 is the empty basis."""

    columns: np.ndarray

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2:
            raise ValueError("basis columns must form a 2-d array")
        self.columns = cols
        if self.dim > self.ambient_dim:
            raise ValueError(f"basis has {self.dim} columns in ambient dimension {self.ambient_dim}")
        if self.dim > 0:
            gram = cols.T @ cols
            err = np.max(np.abs(gram - np.eye(self.dim)))
            if err > ORTHONORMALITY_TOL:
                raise ValueError(f"columns are not orthonormal (max deviation {err:.3e})")

    @classmethod
    def empty(cls, ambient_dim):
        return cls(np.zeros((ambient_dim, 0)))

    @property
    def ambient_dim(self):
        return self.columns.shape[0]

    @property
    def dim(self):
        return self.columns.shape[1]


@dataclass
class SpectrumSummary:
    """Eigenvalues sorted descending with the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        if np.any(np.diff(self.eigenvalues) > 0):
            raise ValueError("eigenvalues must be non-increasing")


def sym_eig(S):
    """Full spectral decomposition of a symmetric matrix.

    Parameters
    ----------
    S : (D, D) array
        Symmetric within ``1e-12`` relative asymmetry.

    Returns
    -------
    SpectrumSummary
        Eigenvalues descending; deterministic for identical input.
    """
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError("sym_eig expects a square matrix")
    scale = np.max(np.abs(S)) if S.size else 0.0
    asym = np.max(np.abs(S - S.T)) if S.size else 0.0
    if asym > 1e-12 * max(scale, 1e-300):
        raise ValueError(f"matrix is not symmetric (relative asymmetry {asym / max(scale, 1e-300):.3e})")
    sym = 0.5 * (S + S.T)
    w, V = kernels.jacobi_eigh(sym)
    order = np.argsort(-w, kind="stable")
    return SpectrumSummary(w[order], V[:, order])


def haar_orthogonal(D, rng):
    """Rotation-invariant random orthogonal matrix.

    Orthonormalizes a D x D standard-normal matrix and flips column signs so
    the triangular factor has a positive diagonal, which makes the draw exact
    with respect to the invariant (Haar) measure.
    """
    if D < 1:
        raise ValueError("D must be >= 1")
    G = rng.standard_normal((D, D))
    Q, R = np.linalg.qr(G)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def gaussian_matrix(D, d, rng):
    """D x d matrix with i.i.d. standard-normal entries."""
    if D < 1 or d < 1:
        raise ValueError("matrix dimensions must be >= 1")
    return rng.standard_normal((D, d))


def gram_schmidt_append(basis, v, residual_tol):
    """Try to extend an orthonormal basis with (the normalized residual of) v.

    A classical projection pass removes the span of the current columns; a
    single re-orthogonalization pass runs when the residual lost more than
    half the input norm, which keeps orthonormality near working precision.
    Returns ``(basis, accepted, residual_norm)``; the basis is unchanged when
    the residual norm falls below ``residual_tol``.
    """
    if residual_tol <= 0:
        raise ValueError("residual_tol must be positive")
    v = np.asarray(v, dtype=float)
    if v.shape != (basis.ambient_dim,):
        raise ValueError(f"vector has shape {v.shape}, expected ({basis.ambient_dim},)")
    U = basis.columns
    r = v - U @ (U.T @ v)
    if np.linalg.norm(r) < 0.5 * np.linalg.norm(v):
        r = r - U @ (U.T @ r)
    rn = float(np.linalg.norm(r))
    if rn >= residual_tol:
        new_cols = np.column_stack([U, r / rn])
        return OrthonormalBasis(new_cols), True, rn
    return basis, False, rn


def numeric_rank(eigenvalues, D):
    """Count of eigenvalues above the default-tolerance threshold D*eps*lam1."""
    lam = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, None)
    if lam.size == 0:
        return 0
    tol = D * np.finfo(float).eps * float(np.max(lam))
    return int(np.sum(lam > tol))
