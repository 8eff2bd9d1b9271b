"""Pure-numpy fallback for the hot kernels.

Mirrors the compiled extension in ``_fast.pyx``: cyclic-Jacobi symmetric
eigendecomposition, benchmark-function dispatch by id, and the quasi-Newton
local descent used by the multistart solver.  Selected automatically when
the extension is unavailable or when ``ASOPT_PURE_KERNELS=1``.
"""

import numpy as np

from .. import functions

BACKEND = "pure"


def jacobi_eigh(S, tol_factor=1e-12, max_sweeps=100):
    """Full spectral decomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns ``(w, V)`` unordered, with ``S ~= V @ diag(w) @ V.T``.  Sweeps stop
    once the off-diagonal Frobenius mass falls below ``tol_factor * ||S||_F``.
    """
    A = np.array(S, dtype=float, copy=True)
    n = A.shape[0]
    V = np.eye(n)
    fro = np.linalg.norm(A, "fro")
    if fro == 0.0 or n == 1:
        return np.diag(A).copy(), V
    tol = tol_factor * fro
    skip = tol / (2.0 * n)
    for _ in range(max_sweeps):
        off2 = np.sum(A * A) - np.sum(np.diag(A) ** 2)
        if off2 <= tol * tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= skip:
                    continue
                theta = 0.5 * (A[q, q] - A[p, p]) / apq
                if theta != 0.0:
                    t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta))
                else:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                Ap = A[:, p].copy()
                Aq = A[:, q].copy()
                A[:, p] = c * Ap - s * Aq
                A[:, q] = s * Ap + c * Aq
                Ap = A[p, :].copy()
                Aq = A[q, :].copy()
                A[p, :] = c * Ap - s * Aq
                A[q, :] = s * Ap + c * Aq
                A[p, q] = 0.0
                A[q, p] = 0.0
                Vp = V[:, p].copy()
                Vq = V[:, q].copy()
                V[:, p] = c * Vp - s * Vq
                V[:, q] = s * Vp + c * Vq
    return np.diag(A).copy(), V


def base_value(fid, param, y):
    fn = functions.DISPATCH[fid][0]
    if fid == functions.EASOM:
        return float(fn(y, param))
    return float(fn(y))


def base_gradient(fid, param, y):
    fn = functions.DISPATCH[fid][1]
    if fid == functions.EASOM:
        return np.asarray(fn(y, param), dtype=float)
    return np.asarray(fn(y), dtype=float)


def bfgs_minimize(fun, grad, y0, grad_tol, f_stag_tol, max_iters, max_backtracks=40):
    """Monotone quasi-Newton descent with Armijo backtracking.

    Dense inverse-curvature (BFGS) update; stops on gradient norm, on three
    consecutive objective stalls, or at the iteration cap.  Returns
    ``(y, f, n_evals, n_grads, converged, iters)``.
    """
    slope_factor = 1e-4
    y = np.array(y0, dtype=float, copy=True)
    d = y.size
    fy = fun(y)
    evals = 1
    grads = 0
    if not np.isfinite(fy):
        return y, fy, evals, grads, False, 0
    gy = grad(y)
    grads += 1
    H = np.eye(d)
    stall = 0
    it = 0
    converged = False
    while it < max_iters:
        it += 1
        if np.linalg.norm(gy) <= grad_tol:
            converged = True
            break
        p = -H @ gy
        slope = float(gy @ p)
        if slope >= 0.0:
            # stale curvature model; fall back to steepest descent
            H = np.eye(d)
            p = -gy
            slope = -float(gy @ gy)
            if slope == 0.0:
                converged = True
                break
        t = 1.0
        accepted = False
        for _ in range(max_backtracks):
            y_new = y + t * p
            f_new = fun(y_new)
            evals += 1
            if np.isfinite(f_new) and f_new <= fy + slope_factor * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        g_new = grad(y_new)
        grads += 1
        if not np.all(np.isfinite(g_new)):
            y, fy = y_new, f_new
            break
        if abs(f_new - fy) <= f_stag_tol:
            stall += 1
        else:
            stall = 0
        s = y_new - y
        yv = g_new - gy
        sy = float(s @ yv)
        if sy > 1e-10 * np.linalg.norm(s) * np.linalg.norm(yv):
            Hy = H @ yv
            rho = 1.0 / sy
            H = (
                H
                - rho * (np.outer(s, Hy) + np.outer(Hy, s))
                + (rho * rho * float(yv @ Hy) + rho) * np.outer(s, s)
            )
        y, fy, gy = y_new, f_new, g_new
        if stall >= 3:
            converged = True
            break
    return y, fy, evals, grads, converged, it


def bfgs_embedded(fid, param, halfwidth, center, B, q, y0, grad_tol, f_stag_tol, max_iters, max_backtracks=40):
    """Local descent on y -> h(center + halfwidth * (B y + q)) for a catalogued base h."""
    val, grd = functions.DISPATCH[fid]
    if fid == functions.EASOM:
        base_f = lambda z: val(z, param)
        base_g = lambda z: grd(z, param)
    else:
        base_f, base_g = val, grd

    def fun(y):
        return float(base_f(center + halfwidth * (B @ y + q)))

    def grad(y):
        inner = base_g(center + halfwidth * (B @ y + q))
        return B.T @ (halfwidth * inner)

    return bfgs_minimize(fun, grad, y0, grad_tol, f_stag_tol, max_iters, max_backtracks)


def probe_embedded(fid, param, halfwidth, center, B, q, y, deltas):
    """Values at the single-coordinate displacements y + delta * e_j, all (j, delta) pairs."""
    d = y.size
    zbase = B @ y + q
    out = np.empty((d, len(deltas)))
    for j in range(d):
        col = B[:, j]
        for k, delta in enumerate(deltas):
            yy = center + halfwidth * (zbase + delta * col)
            out[j, k] = base_value(fid, param, yy)
    return out
