"""Simulated annealing: gradient-free minimization by Metropolis sampling.

Only objective evaluations are needed.  Proposals perturb one coordinate at
a time; worsening moves are accepted with probability exp(-delta/T) under a
geometric cooling schedule, which lets the search climb out of local minima
early and settle into greedy descent as T shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..callbacks import StepTaken
from ..core import Diagnostic, ObjectiveCapabilities, TerminationReason
from ._common import finish_run, prepare_run

__all__ = ["SimulatedAnnealing"]


@dataclass
class SimulatedAnnealing:
    """Single-coordinate-move annealer.

    Each move picks one uniformly random coordinate j and perturbs it by
    U(-w, w) with w = move_scale * (1 + |x_j|), so moves scale with the
    coordinate's magnitude.  Moves with delta <= 0 are always accepted (ties
    included); NaN trial values are always rejected.  After
    ``moves_per_temperature`` moves the temperature is multiplied by
    ``cooling_factor``; once it falls below ``min_temperature`` only
    improving moves are accepted.  ``iterations`` counts proposed moves, and
    the best-ever iterate is returned, not the final one.

    Defaults chosen at run time: ``initial_temperature`` None means
    100*|f(x0)| + 1, ``moves_per_temperature`` None means 20 per dimension.
    Runs are deterministic given ``seed``.
    """

    initial_temperature: float | None = None
    cooling_factor: float = 0.93
    moves_per_temperature: int | None = None
    move_scale: float = 0.02
    min_temperature: float = 1e-10
    max_iterations: int = 100000
    seed: int = 0

    requires = ObjectiveCapabilities(evaluate=True)

    def __post_init__(self):
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise Diagnostic(
                f"initial_temperature must be > 0, got {self.initial_temperature}"
            )
        if not 0.0 < self.cooling_factor < 1.0:
            raise Diagnostic(f"cooling_factor must be in (0, 1), got {self.cooling_factor}")
        if self.moves_per_temperature is not None and self.moves_per_temperature < 1:
            raise Diagnostic(
                f"moves_per_temperature must be >= 1, got {self.moves_per_temperature}"
            )
        if self.move_scale <= 0:
            raise Diagnostic(f"move_scale must be > 0, got {self.move_scale}")
        if self.min_temperature <= 0:
            raise Diagnostic(f"min_temperature must be > 0, got {self.min_temperature}")
        if self.max_iterations < 0:
            raise Diagnostic(f"max_iterations must be >= 0, got {self.max_iterations}")

    def optimize(self, objective, x0, callbacks=()):
        """Minimize ``objective`` from ``x0``; returns (best parameters, result)."""
        x, adapter, events, started = prepare_run(
            objective, x0, callbacks, self.requires, "simulated annealing"
        )
        if events.terminate_requested:
            return x, finish_run(
                adapter, events, started, np.nan, 0, TerminationReason.CALLBACK_REQUESTED
            )
        rng = np.random.default_rng(self.seed)
        value = adapter.evaluate(x)
        best_x = x.copy()
        best_value = value
        temperature = (
            self.initial_temperature
            if self.initial_temperature is not None
            else 100.0 * abs(value) + 1.0
        )
        moves_per_temperature = (
            self.moves_per_temperature if self.moves_per_temperature is not None else 20 * x.size
        )
        moves = 0
        reason = None
        while reason is None:
            for _ in range(moves_per_temperature):
                if self.max_iterations and moves >= self.max_iterations:
                    reason = TerminationReason.MAX_ITERATIONS
                    break
                if events.terminate_requested:
                    reason = TerminationReason.CALLBACK_REQUESTED
                    break
                j = int(rng.integers(x.size))
                half_width = self.move_scale * (1.0 + abs(float(x.flat[j])))
                proposal = x.copy()
                proposal.flat[j] += rng.uniform(-half_width, half_width)
                trial = adapter.evaluate(proposal)
                delta = trial - value
                accept = not math.isnan(trial) and (
                    delta <= 0
                    or (
                        temperature >= self.min_temperature
                        and rng.random() < math.exp(-delta / temperature)
                    )
                )
                if accept:
                    x, value = proposal, trial
                    if value < best_value:
                        best_x = x.copy()
                        best_value = value
                moves += 1
                events.dispatch(StepTaken(iteration=moves, objective=value))
            else:
                temperature *= self.cooling_factor
        return best_x, finish_run(adapter, events, started, best_value, moves, reason)
