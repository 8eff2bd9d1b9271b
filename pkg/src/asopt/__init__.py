"""Global optimization of functions with low effective dimension.

The toolkit learns the subspace a high-dimensional objective actually varies
along from sampled gradients, solves reduced subproblems inside it, and ships
random-embedding baselines, sampling-complexity calculators, a synthetic
benchmark generator and a reproducible experiment harness.
"""

from . import bench, drivers, linops, objectives, solver, subspace
from .drivers import AlgorithmConfig, RunRecord, run_algorithm
from .kernels import BACKEND as kernel_backend
from .objectives import alpha_easom, catalogue, get_function, make_embedded, polynomial_example
from .solver import ReducedProblem, SolverOptions, multistart_minimize
from .subspace import estimate_C, sample_gradients, standard_normal, uniform_box

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "ReducedProblem",
    "RunRecord",
    "SolverOptions",
    "alpha_easom",
    "bench",
    "catalogue",
    "drivers",
    "estimate_C",
    "get_function",
    "kernel_backend",
    "linops",
    "make_embedded",
    "multistart_minimize",
    "objectives",
    "polynomial_example",
    "run_algorithm",
    "sample_gradients",
    "solver",
    "standard_normal",
    "subspace",
    "uniform_box",
    "__version__",
]
