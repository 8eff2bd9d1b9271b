import numpy as np
import pytest

from asopt.objectives import BaseFunction


def constant_base(value, d):
    """d-dimensional base function that is identically `value`."""
    return BaseFunction(
        name="const",
        d_e=d,
        lower=-np.ones(d),
        upper=np.ones(d),
        f_star=value,
        minimizer=np.zeros(d),
        eval=lambda y: float(value),
        grad=lambda y: np.zeros(d),
    )


def linear_base(c):
    c = np.asarray(c, dtype=float)
    d = c.size
    return BaseFunction(
        name="linear",
        d_e=d,
        lower=-np.ones(d),
        upper=np.ones(d),
        f_star=float("nan"),  # unbounded below
        minimizer=np.zeros(d),
        eval=lambda y: float(c @ np.asarray(y)),
        grad=lambda y: c.copy(),
    )


def sphere_base(d, half=False):
    scale = 0.5 if half else 1.0
    return BaseFunction(
        name="sphere",
        d_e=d,
        lower=-np.ones(d),
        upper=np.ones(d),
        f_star=0.0,
        minimizer=np.zeros(d),
        eval=lambda y: float(scale * np.asarray(y) @ np.asarray(y)),
        grad=lambda y: 2.0 * scale * np.asarray(y),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
