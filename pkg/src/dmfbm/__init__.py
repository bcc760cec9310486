"""Drift MLE for the double mixed fractional Brownian model.

The model is X_t = theta*t + B1_t + B2_t with two independent fractional
Brownian components of Hurst indices 1/2 < h1 < h2 < 1.  The maximum
likelihood estimator of theta weighs the observed increments by the
solution h of a weakly singular Fredholm equation of the second kind;
this package evaluates the kernel analytically through hypergeometric
factorizations, solves the equation by product integration, simulates the
model exactly, and runs reproducible estimation campaigns.
"""

from .errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    GridMismatchError,
    SingularSystemError,
)
from .specfun import (
    HypParams,
    InterpolationTable,
    beta_fn,
    gamma_fn,
    hyp2f1,
    hyp2f1_grid,
    hyp2f1_table,
)
from .quadrature import QuadratureSpec
from .kernel import HurstPair, KernelConstants, KernelModel, g_rhs, make_constants
from .fredholm import (
    DiscreteSolution,
    Grid,
    SolverConfig,
    assemble,
    gamma_operator_matrix,
    manufactured_rhs,
    solve,
    solve_mle_h,
    weight_psi1,
    weight_psi2,
    weight_sum_matrix,
)
from .fbm import MixedPath, RngSpec, fbm_sample, fgn_covariance, mixed_path
from .estimator import (
    EstimationResult,
    MonteCarloSummary,
    SolutionCache,
    estimate_theta,
    h_on_grid,
    run_montecarlo,
    solve_weight,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ConvergenceError",
    "DomainError",
    "GridMismatchError",
    "SingularSystemError",
    "HypParams",
    "InterpolationTable",
    "beta_fn",
    "gamma_fn",
    "hyp2f1",
    "hyp2f1_grid",
    "hyp2f1_table",
    "QuadratureSpec",
    "HurstPair",
    "KernelConstants",
    "KernelModel",
    "g_rhs",
    "make_constants",
    "DiscreteSolution",
    "Grid",
    "SolverConfig",
    "assemble",
    "gamma_operator_matrix",
    "manufactured_rhs",
    "solve",
    "solve_mle_h",
    "weight_psi1",
    "weight_psi2",
    "weight_sum_matrix",
    "MixedPath",
    "RngSpec",
    "fbm_sample",
    "fgn_covariance",
    "mixed_path",
    "EstimationResult",
    "MonteCarloSummary",
    "SolutionCache",
    "estimate_theta",
    "h_on_grid",
    "run_montecarlo",
    "solve_weight",
]
