"""numopt: small numerical-optimization toolkit.

Objectives are plain objects; optimizers state what they need and check it
up front.  Minimal use:

    import numpy as np
    from numopt import LBFGS
    from numopt.problems import LinearRegression, generate_noisy_linear

    X, y, _ = generate_noisy_linear(d=5, n=200, noise_scale=1.0, seed=0)
    x, result = LBFGS().optimize(LinearRegression(X, y), np.zeros((5, 1)))
    print(result.final_objective, result.termination)

Any object with the right methods works in place of the bundled problems;
see ``numopt.core`` for the method contracts and what gets inferred when a
method is missing.
"""

from .callbacks import (
    BeginEpoch,
    BeginOptimization,
    CallbackDecision,
    CallbackList,
    EarlyStopping,
    EndEpoch,
    EndOptimization,
    EvaluateCalled,
    GradientCalled,
    ProgressPrinter,
    StepTaken,
    TimeLimit,
    TraceRecorder,
    dispatch,
    parse_progress_line,
)
from .core import (
    Diagnostic,
    ObjectiveAdapter,
    ObjectiveCapabilities,
    OptimizationResult,
    TerminationReason,
    as_parameters,
    check_requirements,
    finite_difference_gradient,
)
from .optimizers import (
    LBFGS,
    SGD,
    AdamUpdate,
    GradientDescent,
    LbfgsMemory,
    MomentumUpdate,
    SimulatedAnnealing,
    UpdatePolicy,
    VanillaUpdate,
    backtracking_line_search,
    two_loop_direction,
)

__version__ = "0.1.0"

__all__ = [
    "Diagnostic",
    "ObjectiveCapabilities",
    "ObjectiveAdapter",
    "OptimizationResult",
    "TerminationReason",
    "check_requirements",
    "finite_difference_gradient",
    "as_parameters",
    "CallbackDecision",
    "BeginOptimization",
    "EndOptimization",
    "EvaluateCalled",
    "GradientCalled",
    "StepTaken",
    "BeginEpoch",
    "EndEpoch",
    "dispatch",
    "CallbackList",
    "EarlyStopping",
    "ProgressPrinter",
    "parse_progress_line",
    "TraceRecorder",
    "TimeLimit",
    "LBFGS",
    "LbfgsMemory",
    "two_loop_direction",
    "backtracking_line_search",
    "GradientDescent",
    "SGD",
    "UpdatePolicy",
    "VanillaUpdate",
    "MomentumUpdate",
    "AdamUpdate",
    "SimulatedAnnealing",
    "__version__",
]
