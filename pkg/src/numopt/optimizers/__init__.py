"""Pre-built optimizers.  Each exposes optimize(objective, x0, callbacks=()) ->
(parameters, OptimizationResult) and a ``requires`` capability constant."""

from .annealing import SimulatedAnnealing
from .gradient_descent import GradientDescent
from .lbfgs import LBFGS, LbfgsMemory, backtracking_line_search, two_loop_direction
from .sgd import SGD, AdamUpdate, MomentumUpdate, UpdatePolicy, VanillaUpdate

__all__ = [
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
]
