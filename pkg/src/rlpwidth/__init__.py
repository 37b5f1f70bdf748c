"""Exact asymptotic objectives of Gaussian random linear programs.

``theory`` evaluates the closed-form limit of ``(1/sqrt(n)) min c^T x`` over
``{x : A x <= a}`` for iid standard normal ``A``; ``montecarlo`` checks it by
simulation with the dense solver in ``lp``.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    NoFeasibleScaleError,
    ParameterError,
    RlpError,
)
from .kernels import BACKEND  # noqa: E402
from .lp import LpInstance, LpSolution, LpStatus, solve_lp, vertex_enumerate  # noqa: E402
from .montecarlo import CMode, McEstimate, TrialConfig, concentration_report, run_trials  # noqa: E402
from .theory import (  # noqa: E402
    AtomsRhs,
    ConstantRhs,
    GaussianRhs,
    TheoryResult,
    VectorRhs,
    f1,
    lambda_hat,
    mean_width,
    per_constraint_term,
    q,
    solve_xi,
    xi_asymptote,
)

__all__ = [
    "AtomsRhs", "BACKEND", "CMode", "ConstantRhs", "ConvergenceError", "DomainError",
    "GaussianRhs", "LpInstance", "LpSolution", "LpStatus", "McEstimate", "NoFeasibleScaleError",
    "ParameterError", "RlpError", "TheoryResult", "TrialConfig", "VectorRhs",
    "concentration_report", "f1", "lambda_hat", "mean_width", "per_constraint_term", "q",
    "run_trials", "solve_lp", "solve_xi", "vertex_enumerate", "xi_asymptote",
]
