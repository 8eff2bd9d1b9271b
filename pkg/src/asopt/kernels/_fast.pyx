# Compiled hot kernels: cyclic-Jacobi eigendecomposition, benchmark-function
# dispatch by id, and the embedded-chain BFGS descent.  Mirrors _pure.py.

import numpy as np

cimport numpy as cnp
from libc.math cimport M_PI, cos, exp, fabs, hypot, isfinite, sin, sqrt

cnp.import_array()

BACKEND = "compiled"

# ids must match functions.py
cdef enum:
    BEALE = 0
    BRANIN = 1
    BRENT = 2
    CAMEL = 3
    GOLDSTEIN_PRICE = 4
    HARTMANN3 = 5
    HARTMANN6 = 6
    LEVY = 7
    ROSENBROCK = 8
    SHEKEL5 = 9
    SHEKEL7 = 10
    SHEKEL10 = 11
    SHUBERT = 12
    STYBLINSKI_TANG = 13
    TRID = 14
    ZETTL = 15
    EASOM = 16
    FLAT_QUARTIC = 17

cdef double[4] HART_ALPHA = [1.0, 1.2, 3.0, 3.2]
# row-major 4 x 3 / 4 x 6 / 4 x 10 constant tables
cdef double[12] HART3_A = [3.0, 10.0, 30.0, 0.1, 10.0, 35.0, 3.0, 10.0, 30.0, 0.1, 10.0, 35.0]
cdef double[12] HART3_P = [0.3689, 0.1170, 0.2673, 0.4699, 0.4387, 0.7470,
                           0.1091, 0.8732, 0.5547, 0.0381, 0.5743, 0.8828]
cdef double[24] HART6_A = [10.0, 3.0, 17.0, 3.5, 1.7, 8.0,
                           0.05, 10.0, 17.0, 0.1, 8.0, 14.0,
                           3.0, 3.5, 1.7, 10.0, 17.0, 8.0,
                           17.0, 8.0, 0.05, 10.0, 0.1, 14.0]
cdef double[24] HART6_P = [0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886,
                           0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991,
                           0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650,
                           0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381]
cdef double[10] SHEKEL_BETA = [0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5]
cdef double[40] SHEKEL_C = [4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0,
                            4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6,
                            4.0, 1.0, 8.0, 6.0, 3.0, 2.0, 5.0, 8.0, 6.0, 7.0,
                            4.0, 1.0, 8.0, 6.0, 7.0, 9.0, 3.0, 1.0, 2.0, 3.6]

cdef double BRANIN_B = 5.1 / (4.0 * M_PI * M_PI)
cdef double BRANIN_C = 5.0 / M_PI
cdef double BRANIN_S = 10.0 * (1.0 - 1.0 / (8.0 * M_PI))


# ---------------------------------------------------------------- functions

cdef double _hartmann_val(int dim, const double* y) noexcept nogil:
    cdef double total = 0.0, arg, diff
    cdef int i, j
    cdef const double* A
    cdef const double* P
    if dim == 3:
        A = &HART3_A[0]
        P = &HART3_P[0]
    else:
        A = &HART6_A[0]
        P = &HART6_P[0]
    for i in range(4):
        arg = 0.0
        for j in range(dim):
            diff = y[j] - P[i * dim + j]
            arg += A[i * dim + j] * diff * diff
        total += HART_ALPHA[i] * exp(-arg)
    return -total


cdef void _hartmann_grad(int dim, const double* y, double* out) noexcept nogil:
    cdef double arg, e, diff
    cdef int i, j
    cdef const double* A
    cdef const double* P
    if dim == 3:
        A = &HART3_A[0]
        P = &HART3_P[0]
    else:
        A = &HART6_A[0]
        P = &HART6_P[0]
    for j in range(dim):
        out[j] = 0.0
    for i in range(4):
        arg = 0.0
        for j in range(dim):
            diff = y[j] - P[i * dim + j]
            arg += A[i * dim + j] * diff * diff
        e = HART_ALPHA[i] * exp(-arg)
        for j in range(dim):
            out[j] += e * 2.0 * A[i * dim + j] * (y[j] - P[i * dim + j])


cdef double _shekel_val(int m, const double* y) noexcept nogil:
    cdef double total = 0.0, den, diff
    cdef int i, j
    for i in range(m):
        den = SHEKEL_BETA[i]
        for j in range(4):
            diff = y[j] - SHEKEL_C[j * 10 + i]
            den += diff * diff
        total += 1.0 / den
    return -total


cdef void _shekel_grad(int m, const double* y, double* out) noexcept nogil:
    cdef double den, diff
    cdef int i, j
    for j in range(4):
        out[j] = 0.0
    for i in range(m):
        den = SHEKEL_BETA[i]
        for j in range(4):
            diff = y[j] - SHEKEL_C[j * 10 + i]
            den += diff * diff
        for j in range(4):
            out[j] += 2.0 * (y[j] - SHEKEL_C[j * 10 + i]) / (den * den)


cdef double _base_val(int fid, double param, const double* y, int d) noexcept nogil:
    cdef double x1, x2, e1, e2, t, u, v, r, s, total, w, wn, p1, p2, e3
    cdef int i, j
    if fid == BEALE:
        x1 = y[0]; x2 = y[1]
        e1 = 1.5 - x1 + x1 * x2
        e2 = 2.25 - x1 + x1 * x2 * x2
        e3 = 2.625 - x1 + x1 * x2 * x2 * x2
        return e1 * e1 + e2 * e2 + e3 * e3
    if fid == BRANIN:
        x1 = y[0]; x2 = y[1]
        t = x2 - BRANIN_B * x1 * x1 + BRANIN_C * x1 - 6.0
        return t * t + BRANIN_S * cos(x1) + 10.0
    if fid == BRENT:
        x1 = y[0]; x2 = y[1]
        return (x1 + 10.0) * (x1 + 10.0) + (x2 + 10.0) * (x2 + 10.0) + exp(-x1 * x1 - x2 * x2)
    if fid == CAMEL:
        x1 = y[0]; x2 = y[1]
        return (4.0 - 2.1 * x1 * x1 + x1 * x1 * x1 * x1 / 3.0) * x1 * x1 \
            + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2
    if fid == GOLDSTEIN_PRICE:
        x1 = y[0]; x2 = y[1]
        u = (x1 + x2 + 1.0) * (x1 + x2 + 1.0)
        v = 19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
        r = (2.0 * x1 - 3.0 * x2) * (2.0 * x1 - 3.0 * x2)
        s = 18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
        return (1.0 + u * v) * (30.0 + r * s)
    if fid == HARTMANN3:
        return _hartmann_val(3, y)
    if fid == HARTMANN6:
        return _hartmann_val(6, y)
    if fid == LEVY:
        w = 1.0 + (y[0] - 1.0) / 4.0
        t = sin(M_PI * w)
        total = t * t
        for i in range(d - 1):
            w = 1.0 + (y[i] - 1.0) / 4.0
            t = sin(M_PI * w + 1.0)
            total += (w - 1.0) * (w - 1.0) * (1.0 + 10.0 * t * t)
        wn = 1.0 + (y[d - 1] - 1.0) / 4.0
        t = sin(2.0 * M_PI * wn)
        return total + (wn - 1.0) * (wn - 1.0) * (1.0 + t * t)
    if fid == ROSENBROCK:
        total = 0.0
        for i in range(d - 1):
            t = y[i + 1] - y[i] * y[i]
            total += 100.0 * t * t + (1.0 - y[i]) * (1.0 - y[i])
        return total
    if fid == SHEKEL5:
        return _shekel_val(5, y)
    if fid == SHEKEL7:
        return _shekel_val(7, y)
    if fid == SHEKEL10:
        return _shekel_val(10, y)
    if fid == SHUBERT:
        e1 = 0.0; e2 = 0.0
        for j in range(1, 6):
            e1 += j * cos((j + 1.0) * y[0] + j)
            e2 += j * cos((j + 1.0) * y[1] + j)
        return e1 * e2
    if fid == STYBLINSKI_TANG:
        total = 0.0
        for i in range(d):
            t = y[i]
            total += t * t * t * t - 16.0 * t * t + 5.0 * t
        return 0.5 * total
    if fid == TRID:
        total = 0.0
        for i in range(d):
            total += (y[i] - 1.0) * (y[i] - 1.0)
        for i in range(1, d):
            total -= y[i] * y[i - 1]
        return total
    if fid == ZETTL:
        x1 = y[0]; x2 = y[1]
        t = x1 * x1 + x2 * x2 - 2.0 * x1
        return t * t + 0.25 * x1
    if fid == EASOM:
        p1 = param * (y[0] - M_PI) + M_PI
        p2 = param * (y[1] - M_PI) + M_PI
        return -cos(p1) * cos(p2) * exp(-(p1 - M_PI) * (p1 - M_PI) - (p2 - M_PI) * (p2 - M_PI))
    if fid == FLAT_QUARTIC:
        x1 = y[0]
        if fabs(x1) <= 1.0:
            return -x1 * x1 * x1 * x1 + 2.0 * x1 * x1 - 1.0
        return 0.0
    return 0.0


cdef void _base_grad(int fid, double param, const double* y, int d, double* out) noexcept nogil:
    cdef double x1, x2, e1, e2, e3, t, u, v, r, s, du, dv, da, w, wn, p1, p2, ee, s1, s2, g1, g2
    cdef int i, j
    if fid == BEALE:
        x1 = y[0]; x2 = y[1]
        e1 = 1.5 - x1 + x1 * x2
        e2 = 2.25 - x1 + x1 * x2 * x2
        e3 = 2.625 - x1 + x1 * x2 * x2 * x2
        out[0] = 2.0 * e1 * (x2 - 1.0) + 2.0 * e2 * (x2 * x2 - 1.0) + 2.0 * e3 * (x2 * x2 * x2 - 1.0)
        out[1] = 2.0 * e1 * x1 + 4.0 * e2 * x1 * x2 + 6.0 * e3 * x1 * x2 * x2
        return
    if fid == BRANIN:
        x1 = y[0]; x2 = y[1]
        t = x2 - BRANIN_B * x1 * x1 + BRANIN_C * x1 - 6.0
        out[0] = 2.0 * t * (-2.0 * BRANIN_B * x1 + BRANIN_C) - BRANIN_S * sin(x1)
        out[1] = 2.0 * t
        return
    if fid == BRENT:
        x1 = y[0]; x2 = y[1]
        ee = exp(-x1 * x1 - x2 * x2)
        out[0] = 2.0 * (x1 + 10.0) - 2.0 * x1 * ee
        out[1] = 2.0 * (x2 + 10.0) - 2.0 * x2 * ee
        return
    if fid == CAMEL:
        x1 = y[0]; x2 = y[1]
        out[0] = 8.0 * x1 - 8.4 * x1 * x1 * x1 + 2.0 * x1 * x1 * x1 * x1 * x1 + x2
        out[1] = x1 - 8.0 * x2 + 16.0 * x2 * x2 * x2
        return
    if fid == GOLDSTEIN_PRICE:
        x1 = y[0]; x2 = y[1]
        u = (x1 + x2 + 1.0) * (x1 + x2 + 1.0)
        v = 19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
        du = 2.0 * (x1 + x2 + 1.0)
        dv = -14.0 + 6.0 * x1 + 6.0 * x2
        da = du * v + u * dv  # equal along both coordinates: first factor sees x1 + x2 only
        r = (2.0 * x1 - 3.0 * x2) * (2.0 * x1 - 3.0 * x2)
        s = 18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
        out[0] = da * (30.0 + r * s) + (1.0 + u * v) * (4.0 * (2.0 * x1 - 3.0 * x2) * s + r * (-32.0 + 24.0 * x1 - 36.0 * x2))
        out[1] = da * (30.0 + r * s) + (1.0 + u * v) * (-6.0 * (2.0 * x1 - 3.0 * x2) * s + r * (48.0 - 36.0 * x1 + 54.0 * x2))
        return
    if fid == HARTMANN3:
        _hartmann_grad(3, y, out)
        return
    if fid == HARTMANN6:
        _hartmann_grad(6, y, out)
        return
    if fid == LEVY:
        for i in range(d):
            out[i] = 0.0
        w = 1.0 + (y[0] - 1.0) / 4.0
        out[0] += M_PI * sin(2.0 * M_PI * w)
        for i in range(d - 1):
            w = 1.0 + (y[i] - 1.0) / 4.0
            t = sin(M_PI * w + 1.0)
            out[i] += 2.0 * (w - 1.0) * (1.0 + 10.0 * t * t) \
                + (w - 1.0) * (w - 1.0) * 10.0 * M_PI * sin(2.0 * (M_PI * w + 1.0))
        wn = 1.0 + (y[d - 1] - 1.0) / 4.0
        t = sin(2.0 * M_PI * wn)
        out[d - 1] += 2.0 * (wn - 1.0) * (1.0 + t * t) \
            + (wn - 1.0) * (wn - 1.0) * 2.0 * M_PI * sin(4.0 * M_PI * wn)
        for i in range(d):
            out[i] /= 4.0
        return
    if fid == ROSENBROCK:
        for i in range(d):
            out[i] = 0.0
        for i in range(d - 1):
            t = y[i + 1] - y[i] * y[i]
            out[i] += -400.0 * y[i] * t - 2.0 * (1.0 - y[i])
            out[i + 1] += 200.0 * t
        return
    if fid == SHEKEL5:
        _shekel_grad(5, y, out)
        return
    if fid == SHEKEL7:
        _shekel_grad(7, y, out)
        return
    if fid == SHEKEL10:
        _shekel_grad(10, y, out)
        return
    if fid == SHUBERT:
        s1 = 0.0; s2 = 0.0; g1 = 0.0; g2 = 0.0
        for j in range(1, 6):
            s1 += j * cos((j + 1.0) * y[0] + j)
            s2 += j * cos((j + 1.0) * y[1] + j)
            g1 -= j * (j + 1.0) * sin((j + 1.0) * y[0] + j)
            g2 -= j * (j + 1.0) * sin((j + 1.0) * y[1] + j)
        out[0] = g1 * s2
        out[1] = s1 * g2
        return
    if fid == STYBLINSKI_TANG:
        for i in range(d):
            t = y[i]
            out[i] = 2.0 * t * t * t - 16.0 * t + 2.5
        return
    if fid == TRID:
        for i in range(d):
            out[i] = 2.0 * (y[i] - 1.0)
        for i in range(1, d):
            out[i] -= y[i - 1]
            out[i - 1] -= y[i]
        return
    if fid == ZETTL:
        x1 = y[0]; x2 = y[1]
        t = x1 * x1 + x2 * x2 - 2.0 * x1
        out[0] = 2.0 * t * (2.0 * x1 - 2.0) + 0.25
        out[1] = 4.0 * x2 * t
        return
    if fid == EASOM:
        p1 = param * (y[0] - M_PI) + M_PI
        p2 = param * (y[1] - M_PI) + M_PI
        ee = exp(-(p1 - M_PI) * (p1 - M_PI) - (p2 - M_PI) * (p2 - M_PI))
        out[0] = param * cos(p2) * ee * (sin(p1) + 2.0 * cos(p1) * (p1 - M_PI))
        out[1] = param * cos(p1) * ee * (sin(p2) + 2.0 * cos(p2) * (p2 - M_PI))
        return
    if fid == FLAT_QUARTIC:
        x1 = y[0]
        if fabs(x1) <= 1.0:
            out[0] = -4.0 * x1 * x1 * x1 + 4.0 * x1
        else:
            out[0] = 0.0
        return
    for i in range(d):
        out[i] = 0.0


def base_value(int fid, double param, y):
    cdef cnp.ndarray[double, ndim=1] arr = np.ascontiguousarray(y, dtype=np.float64)
    return _base_val(fid, param, &arr[0], arr.shape[0])


def base_gradient(int fid, double param, y):
    cdef cnp.ndarray[double, ndim=1] arr = np.ascontiguousarray(y, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(arr.shape[0], dtype=np.float64)
    _base_grad(fid, param, &arr[0], arr.shape[0], &out[0])
    return out


# ------------------------------------------------------------------ jacobi

def jacobi_eigh(S, double tol_factor=1e-12, int max_sweeps=100):
    """Cyclic-Jacobi spectral decomposition; returns (w, V) unordered."""
    cdef cnp.ndarray[double, ndim=2] A = np.array(S, dtype=np.float64, copy=True, order="C")
    cdef int n = A.shape[0]
    cdef cnp.ndarray[double, ndim=2] V = np.eye(n)
    cdef double[:, ::1] a = A
    cdef double[:, ::1] v = V
    cdef double fro = 0.0, off2, tol, skip, apq, theta, t, c, s, aip, aiq
    cdef int sweep, p, q, i
    for p in range(n):
        for q in range(n):
            fro += a[p, q] * a[p, q]
    fro = sqrt(fro)
    if fro == 0.0 or n == 1:
        return np.diag(A).copy(), V
    tol = tol_factor * fro
    skip = tol / (2.0 * n)
    with nogil:
        for sweep in range(max_sweeps):
            off2 = 0.0
            for p in range(n):
                for q in range(n):
                    if p != q:
                        off2 += a[p, q] * a[p, q]
            if off2 <= tol * tol:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if fabs(apq) <= skip:
                        continue
                    theta = 0.5 * (a[q, q] - a[p, p]) / apq
                    if theta != 0.0:
                        t = (1.0 if theta > 0 else -1.0) / (fabs(theta) + hypot(1.0, theta))
                    else:
                        t = 1.0
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for i in range(n):
                        aip = a[i, p]; aiq = a[i, q]
                        a[i, p] = c * aip - s * aiq
                        a[i, q] = s * aip + c * aiq
                    for i in range(n):
                        aip = a[p, i]; aiq = a[q, i]
                        a[p, i] = c * aip - s * aiq
                        a[q, i] = s * aip + c * aiq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for i in range(n):
                        aip = v[i, p]; aiq = v[i, q]
                        v[i, p] = c * aip - s * aiq
                        v[i, q] = s * aip + c * aiq
    return np.diag(A).copy(), V


# -------------------------------------------------------------------- bfgs

cdef double _embed_val(int fid, double param, double[::1] hw, double[::1] ctr,
                       double[:, ::1] B, double[::1] q,
                       double* y, double* zbuf) noexcept nogil:
    cdef int de = B.shape[0], d = B.shape[1]
    cdef int i, j
    cdef double t
    for i in range(de):
        t = q[i]
        for j in range(d):
            t += B[i, j] * y[j]
        zbuf[i] = ctr[i] + hw[i] * t
    return _base_val(fid, param, zbuf, de)


cdef void _embed_grad(int fid, double param, double[::1] hw, double[::1] ctr,
                      double[:, ::1] B, double[::1] q,
                      double* y, double* zbuf, double* gbuf, double* out) noexcept nogil:
    cdef int de = B.shape[0], d = B.shape[1]
    cdef int i, j
    cdef double t
    for i in range(de):
        t = q[i]
        for j in range(d):
            t += B[i, j] * y[j]
        zbuf[i] = ctr[i] + hw[i] * t
    _base_grad(fid, param, zbuf, de, gbuf)
    for j in range(d):
        t = 0.0
        for i in range(de):
            t += B[i, j] * hw[i] * gbuf[i]
        out[j] = t


def probe_embedded(int fid, double param, halfwidth, center, B, q, y, deltas):
    """Values at the single-coordinate displacements y + delta * e_j, all (j, delta) pairs."""
    cdef double[::1] hw = np.ascontiguousarray(halfwidth, dtype=np.float64)
    cdef double[::1] ctr = np.ascontiguousarray(center, dtype=np.float64)
    cdef double[:, ::1] Bm = np.ascontiguousarray(B, dtype=np.float64)
    cdef double[::1] qm = np.ascontiguousarray(q, dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] dl = np.ascontiguousarray(deltas, dtype=np.float64)
    cdef int d = yv.shape[0], de = Bm.shape[0], nd = dl.shape[0]
    cdef cnp.ndarray[double, ndim=2] out_arr = np.empty((d, nd))
    cdef double[:, ::1] out = out_arr
    cdef cnp.ndarray[double, ndim=1] zbase_arr = np.zeros(max(de, 1))
    cdef cnp.ndarray[double, ndim=1] zl_arr = np.zeros(max(de, 1))
    cdef double* zbase = &zbase_arr[0]
    cdef double* zl = &zl_arr[0]
    cdef double t
    cdef int i, j, k
    with nogil:
        for i in range(de):
            t = qm[i]
            for j in range(d):
                t += Bm[i, j] * yv[j]
            zbase[i] = t
        for j in range(d):
            for k in range(nd):
                for i in range(de):
                    zl[i] = ctr[i] + hw[i] * (zbase[i] + dl[k] * Bm[i, j])
                out[j, k] = _base_val(fid, param, zl, de)
    return out_arr


def bfgs_embedded(int fid, double param, halfwidth, center, B, q, y0,
                  double grad_tol, double f_stag_tol, int max_iters, int max_backtracks=40):
    """Monotone BFGS descent on the flattened embedded chain; mirrors _pure."""
    cdef double[::1] hw = np.ascontiguousarray(halfwidth, dtype=np.float64)
    cdef double[::1] ctr = np.ascontiguousarray(center, dtype=np.float64)
    cdef double[:, ::1] Bm = np.ascontiguousarray(B, dtype=np.float64)
    cdef double[::1] qm = np.ascontiguousarray(q, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] y_arr = np.array(y0, dtype=np.float64, copy=True)
    cdef int d = y_arr.shape[0]
    cdef int de = Bm.shape[0]

    cdef cnp.ndarray[double, ndim=1] g_arr = np.zeros(d)
    cdef cnp.ndarray[double, ndim=2] H_arr = np.eye(d)
    cdef cnp.ndarray[double, ndim=1] zbuf_arr = np.zeros(max(de, 1))
    cdef cnp.ndarray[double, ndim=1] gbuf_arr = np.zeros(max(de, 1))
    cdef cnp.ndarray[double, ndim=1] pdir_arr = np.zeros(d)
    cdef cnp.ndarray[double, ndim=1] ynew_arr = np.zeros(d)
    cdef cnp.ndarray[double, ndim=1] gnew_arr = np.zeros(d)
    cdef cnp.ndarray[double, ndim=1] hy_arr = np.zeros(d)

    cdef double* y = &y_arr[0]
    cdef double* g = &g_arr[0]
    cdef double[:, ::1] H = H_arr
    cdef double* zbuf = &zbuf_arr[0]
    cdef double* gbuf = &gbuf_arr[0]
    cdef double* pdir = &pdir_arr[0]
    cdef double* ynew = &ynew_arr[0]
    cdef double* gnew = &gnew_arr[0]
    cdef double* hy = &hy_arr[0]

    cdef double slope_factor = 1e-4
    cdef double fy, gn, slope, tstep, f_new, sy, s_norm, yv_norm, rho, hyy, coef, t, si, sj, yvi
    cdef long evals = 0, grads = 0
    cdef int it = 0, stall = 0, i, j, bt
    cdef bint converged = False, accepted, finite_g

    fy = _embed_val(fid, param, hw, ctr, Bm, qm, y, zbuf)
    evals += 1
    if not isfinite(fy):
        return y_arr, fy, evals, grads, False, 0
    _embed_grad(fid, param, hw, ctr, Bm, qm, y, zbuf, gbuf, g)
    grads += 1

    with nogil:
        while it < max_iters:
            it += 1
            gn = 0.0
            for i in range(d):
                gn += g[i] * g[i]
            gn = sqrt(gn)
            if gn <= grad_tol:
                converged = True
                break
            slope = 0.0
            for i in range(d):
                t = 0.0
                for j in range(d):
                    t -= H[i, j] * g[j]
                pdir[i] = t
                slope += g[i] * t
            if slope >= 0.0:
                for i in range(d):
                    for j in range(d):
                        H[i, j] = 1.0 if i == j else 0.0
                    pdir[i] = -g[i]
                slope = -gn * gn
                if slope == 0.0:
                    converged = True
                    break
            tstep = 1.0
            accepted = False
            for bt in range(max_backtracks):
                for i in range(d):
                    ynew[i] = y[i] + tstep * pdir[i]
                f_new = _embed_val(fid, param, hw, ctr, Bm, qm, ynew, zbuf)
                evals += 1
                if isfinite(f_new) and f_new <= fy + slope_factor * tstep * slope:
                    accepted = True
                    break
                tstep *= 0.5
            if not accepted:
                break
            _embed_grad(fid, param, hw, ctr, Bm, qm, ynew, zbuf, gbuf, gnew)
            grads += 1
            finite_g = True
            for i in range(d):
                if not isfinite(gnew[i]):
                    finite_g = False
                    break
            if not finite_g:
                for i in range(d):
                    y[i] = ynew[i]
                fy = f_new
                break
            if fabs(f_new - fy) <= f_stag_tol:
                stall += 1
            else:
                stall = 0
            sy = 0.0
            s_norm = 0.0
            yv_norm = 0.0
            for i in range(d):
                si = ynew[i] - y[i]
                yvi = gnew[i] - g[i]
                sy += si * yvi
                s_norm += si * si
                yv_norm += yvi * yvi
            if sy > 1e-10 * sqrt(s_norm) * sqrt(yv_norm):
                rho = 1.0 / sy
                hyy = 0.0
                for i in range(d):
                    t = 0.0
                    for j in range(d):
                        t += H[i, j] * (gnew[j] - g[j])
                    hy[i] = t
                    hyy += (gnew[i] - g[i]) * t
                coef = rho * rho * hyy + rho
                for i in range(d):
                    si = ynew[i] - y[i]
                    for j in range(d):
                        sj = ynew[j] - y[j]
                        H[i, j] += -rho * (si * hy[j] + hy[i] * sj) + coef * si * sj
            for i in range(d):
                y[i] = ynew[i]
                g[i] = gnew[i]
            fy = f_new
            if stall >= 3:
                converged = True
                break
    return y_arr, fy, evals, grads, converged, it
