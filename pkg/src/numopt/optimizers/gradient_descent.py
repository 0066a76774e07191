"""Fixed-step steepest descent.

Deliberately minimal: one gradient and one objective evaluation per
iteration, no line search, no memory.  Useful as a baseline and as the
reference the batch methods are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..callbacks import StepTaken
from ..core import Diagnostic, ObjectiveCapabilities, TerminationReason
from ._common import finish_run, prepare_run

__all__ = ["GradientDescent"]


@dataclass
class GradientDescent:
    """Steepest descent with a constant step size.

    Stops on the max-abs gradient norm, on a small non-negative relative
    improvement, on the iteration cap (0 means none), or on callback
    request.  A step that makes the objective worse never triggers the
    improvement stop; a diverging run ends with MAX_ITERATIONS so the
    failure is not disguised as convergence.
    """

    step_size: float = 0.01
    max_iterations: int = 10000
    min_gradient_norm: float = 1e-6
    min_objective_improvement: float = 1e-10

    requires = ObjectiveCapabilities(evaluate=True, gradient=True)

    def __post_init__(self):
        if self.step_size <= 0:
            raise Diagnostic(f"step_size must be > 0, got {self.step_size}")
        if self.max_iterations < 0:
            raise Diagnostic(f"max_iterations must be >= 0, got {self.max_iterations}")
        if self.min_gradient_norm < 0 or self.min_objective_improvement < 0:
            raise Diagnostic("tolerances must be >= 0")

    def optimize(self, objective, x0, callbacks=()):
        """Minimize ``objective`` from ``x0``; returns (parameters, result)."""
        x, adapter, events, started = prepare_run(
            objective, x0, callbacks, self.requires, "gradient descent"
        )
        if events.terminate_requested:
            return x, finish_run(
                adapter, events, started, np.nan, 0, TerminationReason.CALLBACK_REQUESTED
            )
        value = adapter.evaluate(x)
        iteration = 0
        while True:
            gradient = adapter.gradient(x)
            gradient_norm = float(np.max(np.abs(gradient)))
            if gradient_norm <= self.min_gradient_norm:
                reason = TerminationReason.GRADIENT_NORM_TOLERANCE
                break
            if events.terminate_requested:
                reason = TerminationReason.CALLBACK_REQUESTED
                break
            iteration += 1
            x = x - self.step_size * gradient
            new_value = adapter.evaluate(x)
            events.dispatch(
                StepTaken(iteration=iteration, objective=new_value, gradient_norm=gradient_norm)
            )
            improvement = value - new_value
            threshold = self.min_objective_improvement * max(1.0, abs(value))
            value = new_value
            if 0 <= improvement <= threshold:
                reason = TerminationReason.OBJECTIVE_IMPROVEMENT_TOLERANCE
                break
            if self.max_iterations and iteration >= self.max_iterations:
                reason = TerminationReason.MAX_ITERATIONS
                break
            if events.terminate_requested:
                reason = TerminationReason.CALLBACK_REQUESTED
                break
        return x, finish_run(adapter, events, started, value, iteration, reason)
