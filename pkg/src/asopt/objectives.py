"""Benchmark objectives: catalogued base functions lifted into R^D.

Each catalogued function h comes with its box domain and global minimum.
``make_embedded`` rescales the box onto [-1, 1]^d_e, pads with zero
coefficients up to dimension D and hides the informative coordinates behind
a random rotation, so the resulting f(x) = h_bar((Q x)_{1:d_e}) has effective
dimension d_e with known minimum value.  Evaluations and gradient samples are
tallied in evaluation units, one gradient sample costing D + 1 units.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import functions, linops


@dataclass
class BaseFunction:
    name: str
    d_e: int
    lower: np.ndarray
    upper: np.ndarray
    f_star: float
    minimizer: np.ndarray
    eval: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], np.ndarray]
    fid: Optional[int] = None  # compiled-kernel id; None for ad-hoc bases
    param: float = 0.0
    grad_elementwise: Optional[Callable] = None  # 1-d bases only: broadcasts over arrays

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        self.minimizer = np.asarray(self.minimizer, dtype=float)


def _box(lo, hi, d):
    return np.full(d, float(lo)), np.full(d, float(hi))


def _entry(name, fid, d_e, lower, upper, f_star, minimizer):
    val, grd = functions.DISPATCH[fid]
    return BaseFunction(
        name=name,
        d_e=d_e,
        lower=lower,
        upper=upper,
        f_star=f_star,
        minimizer=np.asarray(minimizer, dtype=float),
        eval=val,
        grad=grd,
        fid=fid,
    )


def _catalogue_entries():
    F = functions
    pi = math.pi
    return [
        _entry("beale", F.BEALE, 2, *_box(-4.5, 4.5, 2), 0.0, [3.0, 0.5]),
        _entry(
            "branin",
            F.BRANIN,
            2,
            np.array([-5.0, 0.0]),
            np.array([10.0, 15.0]),
            0.3978873577297384,
            [pi, 2.275],
        ),
        _entry("brent", F.BRENT, 2, *_box(-10, 10, 2), 0.0, [-10.0, -10.0]),
        _entry(
            "camel",
            F.CAMEL,
            2,
            np.array([-3.0, -2.0]),
            np.array([3.0, 2.0]),
            -1.0316284534898774,
            [0.08984201302610782, -0.7126564030233764],
        ),
        _entry("goldstein-price", F.GOLDSTEIN_PRICE, 2, *_box(-2, 2, 2), 3.0, [0.0, -1.0]),
        _entry(
            "hartmann3",
            F.HARTMANN3,
            3,
            *_box(0, 1, 3),
            -3.8627797873326624,
            [0.11458887626444027, 0.5556488946307521, 0.8525469846840148],
        ),
        _entry(
            "hartmann6",
            F.HARTMANN6,
            6,
            *_box(0, 1, 6),
            -3.3223680114155147,
            [
                0.2016895109093536,
                0.15001069196404446,
                0.47687397423375477,
                0.275332430434545,
                0.31165161657374274,
                0.6573005340022501,
            ],
        ),
        _entry("levy", F.LEVY, 6, *_box(-10, 10, 6), 0.0, np.ones(6)),
        _entry("rosenbrock", F.ROSENBROCK, 7, *_box(-5, 10, 7), 0.0, np.ones(7)),
        _entry(
            "shekel5",
            F.SHEKEL5,
            4,
            *_box(0, 10, 4),
            -10.153199679058229,
            [4.000037152879676, 4.000133276523043, 4.000037152864273, 4.000133276527847],
        ),
        _entry(
            "shekel7",
            F.SHEKEL7,
            4,
            *_box(0, 10, 4),
            -10.402915336777745,
            [4.0005728191975285, 3.9996062096307963, 4.000572819198012, 3.9996062096338982],
        ),
        _entry(
            "shekel10",
            F.SHEKEL10,
            4,
            *_box(0, 10, 4),
            -10.53644315348353,
            [4.000746868258769, 3.999509480108177, 4.000746868253444, 3.999509480109709],
        ),
        _entry(
            "shubert",
            F.SHUBERT,
            2,
            *_box(-10, 10, 2),
            -186.73090883102387,
            [-1.4251284283003378, -0.8003211004565023],
        ),
        _entry(
            "styblinski-tang",
            F.STYBLINSKI_TANG,
            8,
            *_box(-5, 5, 8),
            -313.3293256301714,
            np.full(8, -2.9035340270743846),
        ),
        _entry("trid", F.TRID, 5, *_box(-25, 25, 5), -30.0, [5.0, 8.0, 9.0, 8.0, 5.0]),
        _entry(
            "zettl",
            F.ZETTL,
            2,
            *_box(-5, 5, 2),
            -0.003791237220468898,
            [-0.0298959850506709, 0.0],
        ),
        alpha_easom(1.0),
    ]


# the sixteen functions of the headline benchmark table; easom is catalogued
# separately for the sampling-complexity study
TABLE_NAMES = (
    "beale",
    "branin",
    "brent",
    "camel",
    "goldstein-price",
    "hartmann3",
    "hartmann6",
    "levy",
    "rosenbrock",
    "shekel5",
    "shekel7",
    "shekel10",
    "shubert",
    "styblinski-tang",
    "trid",
    "zettl",
)


def catalogue():
    """All catalogued base functions: the benchmark table plus easom."""
    return _catalogue_entries()


def get_function(name):
    """Look up a catalogued base function by (lowercase) name."""
    key = name.lower()
    if key == "flat-quartic":
        return polynomial_example()
    for entry in _catalogue_entries():
        if entry.name == key:
            return entry
    raise ValueError(f"unknown function {name!r}")


def alpha_easom(alpha):
    """Sharp-peak 2-d test function; shrinking alpha widens the peak."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    pi = math.pi
    return BaseFunction(
        name="easom" if alpha == 1.0 else f"alpha-easom-{alpha:g}",
        d_e=2,
        lower=np.full(2, -10.0),
        upper=np.full(2, 10.0),
        f_star=-1.0,
        minimizer=np.array([pi, pi]),
        eval=lambda y: functions.easom(y, alpha),
        grad=lambda y: functions.easom_grad(y, alpha),
        fid=functions.EASOM,
        param=alpha,
    )


def polynomial_example():
    """1-d compactly supported bump whose derivative vanishes outside [-1, 1]."""
    return BaseFunction(
        name="flat-quartic",
        d_e=1,
        lower=np.array([-1.0]),
        upper=np.array([1.0]),
        f_star=-1.0,
        minimizer=np.array([0.0]),
        eval=lambda y: float(functions.flat_quartic(np.asarray(y)[0])),
        grad=lambda y: np.atleast_1d(functions.flat_quartic_grad(np.asarray(y)[0])),
        fid=functions.FLAT_QUARTIC,
        grad_elementwise=functions.flat_quartic_grad,
    )


@dataclass
class EvalAccounting:
    """Evaluation-unit tally; one gradient sample costs grad_unit_cost units."""

    grad_unit_cost: int
    plain_evals: int = 0
    gradient_samples: int = 0
    unit_rule: bool = True  # False switches to raw counting (1 unit per gradient)

    @property
    def total_units(self):
        per_grad = self.grad_unit_cost if self.unit_rule else 1
        return self.plain_evals + per_grad * self.gradient_samples

    def merge(self, other):
        self.plain_evals += other.plain_evals
        self.gradient_samples += other.gradient_samples


class EmbeddedObjective:
    """f(x) = h_bar((Q x)_{1:d_e}) on R^D with evaluation accounting.

    ``h_bar`` is the base function composed with the affine map sending
    [-1, 1]^d_e onto the catalogued box.  Rows 1..d_e of Q span the effective
    subspace; the remaining rows span the constant subspace.
    """

    def __init__(self, base, D, seed, rotate=True, charge_gradient_units=True):
        if D < base.d_e:
            raise ValueError(f"ambient dimension {D} is below the effective dimension {base.d_e}")
        self.base = base
        self.D = int(D)
        self.seed = seed
        if rotate:
            rng = np.random.default_rng(np.random.SeedSequence(seed))
            self.Q = linops.haar_orthogonal(D, rng)
        else:
            self.Q = np.eye(D)
        self._rows = self.Q[: base.d_e, :]
        self.halfwidth = (base.upper - base.lower) / 2.0
        self.center = (base.upper + base.lower) / 2.0
        self.accounting = EvalAccounting(grad_unit_cost=self.D + 1, unit_rule=charge_gradient_units)

    @property
    def d_e(self):
        return self.base.d_e

    @property
    def f_star(self):
        return self.base.f_star

    @property
    def effective_basis(self):
        """D x d_e orthonormal basis of the subspace the objective varies along."""
        return self._rows.T

    @property
    def constant_basis(self):
        """D x (D - d_e) orthonormal basis of the subspace the objective ignores."""
        return self.Q[self.base.d_e :, :].T

    def lifted_minimizer(self):
        z_star = (self.base.minimizer - self.center) / self.halfwidth
        return self._rows.T @ z_star

    def _check_input(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.D,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.D},)")
        if not np.all(np.isfinite(x)):
            raise ValueError("point has non-finite entries")
        return x

    def eval_raw(self, x):
        """Objective value without touching the counters."""
        z = self._rows @ x
        return float(self.base.eval(self.center + self.halfwidth * z))

    def grad_raw(self, x):
        """Analytic gradient without touching the counters."""
        z = self._rows @ x
        inner = self.base.grad(self.center + self.halfwidth * z)
        return self._rows.T @ (self.halfwidth * np.asarray(inner))

    def eval(self, x):
        x = self._check_input(x)
        self.accounting.plain_evals += 1
        return self.eval_raw(x)

    def grad_analytic(self, x):
        x = self._check_input(x)
        self.accounting.gradient_samples += 1
        return self.grad_raw(x)

    def grad_fd(self, x):
        """Forward-difference gradient, folded into the D + 1 unit rule."""
        x = self._check_input(x)
        f0 = self.eval_raw(x)
        g = np.zeros(self.D)
        step = np.sqrt(np.finfo(float).eps) * (1.0 + np.abs(x))
        for i in range(self.D):
            xs = x.copy()
            xs[i] += step[i]
            g[i] = (self.eval_raw(xs) - f0) / step[i]
        self.accounting.gradient_samples += 1
        return g

    def embedding_data(self):
        """Kernel-plan ingredients, or None when the base has no compiled id."""
        if self.base.fid is None:
            return None
        return self.base.fid, self.base.param, self.halfwidth, self.center, self._rows


def make_embedded(base, D, seed, rotate=True, charge_gradient_units=True):
    """Lift a catalogued base function into R^D behind a seeded random rotation."""
    return EmbeddedObjective(base, D, seed, rotate=rotate, charge_gradient_units=charge_gradient_units)
