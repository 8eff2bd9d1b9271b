"""Low-dimensional benchmark functions with analytic gradients.

Every function here is defined on all of R^d (the catalogued box is only
used to rescale and to place multistart boxes), so the lifted problems can
be solved unconstrained.  The integer ids in ``FUNC_IDS`` key the compiled
kernels; the pure-python implementations below are the reference.
"""

import numpy as np

# kernel dispatch ids, mirrored in kernels/_fast.pyx
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


def beale(y):
    x1, x2 = y
    e1 = 1.5 - x1 + x1 * x2
    e2 = 2.25 - x1 + x1 * x2**2
    e3 = 2.625 - x1 + x1 * x2**3
    return e1**2 + e2**2 + e3**2


def beale_grad(y):
    x1, x2 = y
    e1 = 1.5 - x1 + x1 * x2
    e2 = 2.25 - x1 + x1 * x2**2
    e3 = 2.625 - x1 + x1 * x2**3
    g1 = 2 * e1 * (x2 - 1) + 2 * e2 * (x2**2 - 1) + 2 * e3 * (x2**3 - 1)
    g2 = 2 * e1 * x1 + 4 * e2 * x1 * x2 + 6 * e3 * x1 * x2**2
    return np.array([g1, g2])


_BRANIN_B = 5.1 / (4 * np.pi**2)
_BRANIN_C = 5 / np.pi
_BRANIN_S = 10 * (1 - 1 / (8 * np.pi))


def branin(y):
    x1, x2 = y
    t = x2 - _BRANIN_B * x1**2 + _BRANIN_C * x1 - 6
    return t**2 + _BRANIN_S * np.cos(x1) + 10


def branin_grad(y):
    x1, x2 = y
    t = x2 - _BRANIN_B * x1**2 + _BRANIN_C * x1 - 6
    return np.array([2 * t * (-2 * _BRANIN_B * x1 + _BRANIN_C) - _BRANIN_S * np.sin(x1), 2 * t])


def brent(y):
    x1, x2 = y
    return (x1 + 10) ** 2 + (x2 + 10) ** 2 + np.exp(-x1**2 - x2**2)


def brent_grad(y):
    x1, x2 = y
    e = np.exp(-x1**2 - x2**2)
    return np.array([2 * (x1 + 10) - 2 * x1 * e, 2 * (x2 + 10) - 2 * x2 * e])


def camel(y):
    # six-hump camel back
    x1, x2 = y
    return (4 - 2.1 * x1**2 + x1**4 / 3) * x1**2 + x1 * x2 + (-4 + 4 * x2**2) * x2**2


def camel_grad(y):
    x1, x2 = y
    g1 = 8 * x1 - 8.4 * x1**3 + 2 * x1**5 + x2
    g2 = x1 - 8 * x2 + 16 * x2**3
    return np.array([g1, g2])


def goldstein_price(y):
    x1, x2 = y
    u = (x1 + x2 + 1) ** 2
    v = 19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    r = (2 * x1 - 3 * x2) ** 2
    s = 18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    return (1 + u * v) * (30 + r * s)


def goldstein_price_grad(y):
    x1, x2 = y
    u = (x1 + x2 + 1) ** 2
    v = 19 - 14 * x1 + 3 * x1**2 - 14 * x2 + 6 * x1 * x2 + 3 * x2**2
    a = 1 + u * v
    du = 2 * (x1 + x2 + 1)
    dv1 = -14 + 6 * x1 + 6 * x2
    da1 = du * v + u * dv1
    da2 = du * v + u * dv1
    r = (2 * x1 - 3 * x2) ** 2
    s = 18 - 32 * x1 + 12 * x1**2 + 48 * x2 - 36 * x1 * x2 + 27 * x2**2
    b = 30 + r * s
    dr1 = 4 * (2 * x1 - 3 * x2)
    dr2 = -6 * (2 * x1 - 3 * x2)
    ds1 = -32 + 24 * x1 - 36 * x2
    ds2 = 48 - 36 * x1 + 54 * x2
    db1 = dr1 * s + r * ds1
    db2 = dr2 * s + r * ds2
    return np.array([da1 * b + a * db1, da2 * b + a * db2])


_HART_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HART3_A = np.array([[3.0, 10, 30], [0.1, 10, 35], [3.0, 10, 30], [0.1, 10, 35]])
_HART3_P = np.array(
    [
        [0.3689, 0.1170, 0.2673],
        [0.4699, 0.4387, 0.7470],
        [0.1091, 0.8732, 0.5547],
        [0.0381, 0.5743, 0.8828],
    ]
)
_HART6_A = np.array(
    [
        [10, 3, 17, 3.5, 1.7, 8],
        [0.05, 10, 17, 0.1, 8, 14],
        [3, 3.5, 1.7, 10, 17, 8],
        [17, 8, 0.05, 10, 0.1, 14],
    ]
)
_HART6_P = 1e-4 * np.array(
    [
        [1312, 1696, 5569, 124, 8283, 5886],
        [2329, 4135, 8307, 3736, 1004, 9991],
        [2348, 1451, 3522, 2883, 3047, 6650],
        [4047, 8828, 8732, 5743, 1091, 381],
    ]
)


def _hartmann(y, A, P):
    diff = np.asarray(y) - P
    return -np.sum(_HART_ALPHA * np.exp(-np.sum(A * diff**2, axis=1)))


def _hartmann_grad(y, A, P):
    diff = np.asarray(y) - P
    e = _HART_ALPHA * np.exp(-np.sum(A * diff**2, axis=1))
    return np.sum(e[:, None] * 2 * A * diff, axis=0)


def hartmann3(y):
    return _hartmann(y, _HART3_A, _HART3_P)


def hartmann3_grad(y):
    return _hartmann_grad(y, _HART3_A, _HART3_P)


def hartmann6(y):
    return _hartmann(y, _HART6_A, _HART6_P)


def hartmann6_grad(y):
    return _hartmann_grad(y, _HART6_A, _HART6_P)


def levy(y):
    y = np.asarray(y)
    w = 1 + (y - 1) / 4
    head = np.sin(np.pi * w[0]) ** 2
    body = np.sum((w[:-1] - 1) ** 2 * (1 + 10 * np.sin(np.pi * w[:-1] + 1) ** 2))
    tail = (w[-1] - 1) ** 2 * (1 + np.sin(2 * np.pi * w[-1]) ** 2)
    return head + body + tail


def levy_grad(y):
    y = np.asarray(y)
    w = 1 + (y - 1) / 4
    g = np.zeros_like(w)
    g[0] += np.pi * np.sin(2 * np.pi * w[0])
    g[:-1] += 2 * (w[:-1] - 1) * (1 + 10 * np.sin(np.pi * w[:-1] + 1) ** 2) + (
        w[:-1] - 1
    ) ** 2 * 10 * np.pi * np.sin(2 * (np.pi * w[:-1] + 1))
    g[-1] += 2 * (w[-1] - 1) * (1 + np.sin(2 * np.pi * w[-1]) ** 2) + (
        w[-1] - 1
    ) ** 2 * 2 * np.pi * np.sin(4 * np.pi * w[-1])
    return g / 4


def rosenbrock(y):
    y = np.asarray(y)
    return np.sum(100 * (y[1:] - y[:-1] ** 2) ** 2 + (1 - y[:-1]) ** 2)


def rosenbrock_grad(y):
    y = np.asarray(y)
    g = np.zeros_like(y)
    g[:-1] += -400 * y[:-1] * (y[1:] - y[:-1] ** 2) - 2 * (1 - y[:-1])
    g[1:] += 200 * (y[1:] - y[:-1] ** 2)
    return g


_SHEKEL_BETA = np.array([1, 2, 2, 4, 4, 6, 3, 7, 5, 5]) / 10.0
_SHEKEL_C = np.array(
    [
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
        [4, 1, 8, 6, 3, 2, 5, 8, 6, 7],
        [4, 1, 8, 6, 7, 9, 3, 1, 2, 3.6],
    ]
)


def _shekel(y, m):
    d = np.asarray(y)[:, None] - _SHEKEL_C[:, :m]
    return -np.sum(1.0 / (np.sum(d**2, axis=0) + _SHEKEL_BETA[:m]))


def _shekel_grad(y, m):
    d = np.asarray(y)[:, None] - _SHEKEL_C[:, :m]
    den = np.sum(d**2, axis=0) + _SHEKEL_BETA[:m]
    return np.sum(2 * d / den**2, axis=1)


def shekel5(y):
    return _shekel(y, 5)


def shekel5_grad(y):
    return _shekel_grad(y, 5)


def shekel7(y):
    return _shekel(y, 7)


def shekel7_grad(y):
    return _shekel_grad(y, 7)


def shekel10(y):
    return _shekel(y, 10)


def shekel10_grad(y):
    return _shekel_grad(y, 10)


_SHUBERT_J = np.arange(1.0, 6.0)


def shubert(y):
    x1, x2 = y
    s1 = np.sum(_SHUBERT_J * np.cos((_SHUBERT_J + 1) * x1 + _SHUBERT_J))
    s2 = np.sum(_SHUBERT_J * np.cos((_SHUBERT_J + 1) * x2 + _SHUBERT_J))
    return s1 * s2


def shubert_grad(y):
    x1, x2 = y
    j = _SHUBERT_J
    s1 = np.sum(j * np.cos((j + 1) * x1 + j))
    s2 = np.sum(j * np.cos((j + 1) * x2 + j))
    d1 = -np.sum(j * (j + 1) * np.sin((j + 1) * x1 + j))
    d2 = -np.sum(j * (j + 1) * np.sin((j + 1) * x2 + j))
    return np.array([d1 * s2, s1 * d2])


def styblinski_tang(y):
    y = np.asarray(y)
    return 0.5 * np.sum(y**4 - 16 * y**2 + 5 * y)


def styblinski_tang_grad(y):
    y = np.asarray(y)
    return 2 * y**3 - 16 * y + 2.5


def trid(y):
    y = np.asarray(y)
    return np.sum((y - 1) ** 2) - np.sum(y[1:] * y[:-1])


def trid_grad(y):
    y = np.asarray(y)
    g = 2 * (y - 1)
    g[1:] -= y[:-1]
    g[:-1] -= y[1:]
    return g


def zettl(y):
    x1, x2 = y
    t = x1**2 + x2**2 - 2 * x1
    return t**2 + 0.25 * x1


def zettl_grad(y):
    x1, x2 = y
    t = x1**2 + x2**2 - 2 * x1
    return np.array([2 * t * (2 * x1 - 2) + 0.25, 4 * x2 * t])


def easom(y, alpha=1.0):
    """Pointed 2-d test function; alpha < 1 widens the peak at (pi, pi)."""
    x1, x2 = y
    p1 = alpha * (x1 - np.pi) + np.pi
    p2 = alpha * (x2 - np.pi) + np.pi
    return -np.cos(p1) * np.cos(p2) * np.exp(-((p1 - np.pi) ** 2) - (p2 - np.pi) ** 2)


def easom_grad(y, alpha=1.0):
    x1, x2 = y
    p1 = alpha * (x1 - np.pi) + np.pi
    p2 = alpha * (x2 - np.pi) + np.pi
    e = np.exp(-((p1 - np.pi) ** 2) - (p2 - np.pi) ** 2)
    g1 = alpha * np.cos(p2) * e * (np.sin(p1) + 2 * np.cos(p1) * (p1 - np.pi))
    g2 = alpha * np.cos(p1) * e * (np.sin(p2) + 2 * np.cos(p2) * (p2 - np.pi))
    return np.array([g1, g2])


def flat_quartic(y):
    """1-d bump -x^4 + 2x^2 - 1 on [-1, 1], identically zero outside.

    Elementwise on arrays; the zero plateau makes the sampled derivative
    matrix vanish with positive probability under wide sampling densities.
    """
    y = np.asarray(y, dtype=float)
    inside = np.abs(y) <= 1.0
    out = np.where(inside, -(y**4) + 2 * y**2 - 1, 0.0)
    return out if out.ndim else float(out)


def flat_quartic_grad(y):
    y = np.asarray(y, dtype=float)
    inside = np.abs(y) <= 1.0
    return np.where(inside, -4 * y**3 + 4 * y, 0.0)


# name -> (fid, value, gradient); the alpha parameter is only live for EASOM
DISPATCH = {
    BEALE: (beale, beale_grad),
    BRANIN: (branin, branin_grad),
    BRENT: (brent, brent_grad),
    CAMEL: (camel, camel_grad),
    GOLDSTEIN_PRICE: (goldstein_price, goldstein_price_grad),
    HARTMANN3: (hartmann3, hartmann3_grad),
    HARTMANN6: (hartmann6, hartmann6_grad),
    LEVY: (levy, levy_grad),
    ROSENBROCK: (rosenbrock, rosenbrock_grad),
    SHEKEL5: (shekel5, shekel5_grad),
    SHEKEL7: (shekel7, shekel7_grad),
    SHEKEL10: (shekel10, shekel10_grad),
    SHUBERT: (shubert, shubert_grad),
    STYBLINSKI_TANG: (styblinski_tang, styblinski_tang_grad),
    TRID: (trid, trid_grad),
    ZETTL: (zettl, zettl_grad),
    EASOM: (easom, easom_grad),
    FLAT_QUARTIC: (flat_quartic, flat_quartic_grad),
}
