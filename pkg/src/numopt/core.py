"""Objective contracts, capability inference, and shared optimizer plumbing.

An objective is any object exposing some subset of:

    evaluate(x) -> float
    gradient(x) -> ndarray              # same shape as x
    evaluate_with_gradient(x) -> (float, ndarray)
    num_parts -> int                    # separable objectives only
    evaluate_parts(x, first, count) -> float
    gradient_parts(x, first, count) -> ndarray

Nothing is registered or subclassed; presence of the methods is the contract.
``ObjectiveCapabilities.of`` reports what an object provides,
``check_requirements`` turns a shortfall into a ``Diagnostic`` that names the
missing methods, and ``ObjectiveAdapter`` fills in the combinations that can
be built from what exists.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Diagnostic",
    "ObjectiveCapabilities",
    "ObjectiveAdapter",
    "OptimizationResult",
    "TerminationReason",
    "check_requirements",
    "finite_difference_gradient",
    "as_parameters",
]


class Diagnostic(Exception):
    """Contract violation with enough context to fix it.

    Raised instead of letting an AttributeError or a shape error surface from
    deep inside an optimizer loop.  The message names the offending method,
    argument, or requirement.
    """


def as_parameters(x0):
    """Copy ``x0`` into a fresh parameter array an optimizer may mutate.

    Accepts 1-D vectors or 2-D (column or general) matrices.  float32 and
    float64 inputs keep their precision and the whole run is carried out in
    that precision; anything else is converted to float64.  Non-finite
    entries are rejected up front because every descent rule would silently
    propagate them.
    """
    x = np.array(x0, copy=True)
    if x.ndim not in (1, 2) or x.size == 0:
        raise Diagnostic(
            f"initial parameters must be a non-empty 1-D or 2-D array, got shape {x.shape}"
        )
    if x.dtype not in (np.float32, np.float64):
        x = x.astype(np.float64)
    if not np.all(np.isfinite(x)):
        raise Diagnostic("initial parameters contain NaN or infinity")
    return x


@dataclass(frozen=True)
class ObjectiveCapabilities:
    """What an objective object provides directly.

    ``num_parts`` is only meaningful when one of the part-wise flags is set.
    """

    evaluate: bool = False
    gradient: bool = False
    evaluate_with_gradient: bool = False
    part_evaluate: bool = False
    part_gradient: bool = False
    num_parts: int | None = None

    @classmethod
    def of(cls, objective):
        """Inspect ``objective`` and report its capabilities.

        A part-wise method without a positive integer ``num_parts`` is a
        contract violation: the part count is what makes windows meaningful.
        """
        part_evaluate = callable(getattr(objective, "evaluate_parts", None))
        part_gradient = callable(getattr(objective, "gradient_parts", None))
        num_parts = None
        if part_evaluate or part_gradient:
            raw = getattr(objective, "num_parts", None)
            if raw is None:
                raise Diagnostic(
                    f"{type(objective).__name__} provides part-wise methods but no num_parts"
                )
            num_parts = int(raw)
            if num_parts < 1:
                raise Diagnostic(
                    f"{type(objective).__name__}.num_parts must be >= 1, got {num_parts}"
                )
        return cls(
            evaluate=callable(getattr(objective, "evaluate", None)),
            gradient=callable(getattr(objective, "gradient", None)),
            evaluate_with_gradient=callable(
                getattr(objective, "evaluate_with_gradient", None)
            ),
            part_evaluate=part_evaluate,
            part_gradient=part_gradient,
            num_parts=num_parts,
        )

    def can_evaluate(self):
        """True when a full objective value is available, directly or summed from parts."""
        return self.evaluate or self.part_evaluate

    def can_gradient(self):
        return self.gradient

    def can_evaluate_with_gradient(self):
        """True when a fused value+gradient is available directly or by pairing
        an available evaluate with an available gradient."""
        return self.evaluate_with_gradient or (self.can_evaluate() and self.gradient)


# Maps a requirement flag to the check that decides whether it is satisfiable
# and to the method name used in diagnostics.
_REQUIREMENT_PROBES = {
    "evaluate": (ObjectiveCapabilities.can_evaluate, "evaluate"),
    "gradient": (ObjectiveCapabilities.can_gradient, "gradient"),
    "evaluate_with_gradient": (
        ObjectiveCapabilities.can_evaluate_with_gradient,
        "evaluate_with_gradient",
    ),
    "part_evaluate": (lambda c: c.part_evaluate, "evaluate_parts (with num_parts)"),
    "part_gradient": (lambda c: c.part_gradient, "gradient_parts (with num_parts)"),
}


def check_requirements(provided, required, consumer="optimizer"):
    """Return None when every required capability is available, else a Diagnostic.

    ``provided`` and ``required`` are ``ObjectiveCapabilities``; a True flag in
    ``required`` means ``consumer`` will call that method.  Requirements are
    satisfiable either directly or through the two inference rules (full value
    from parts, fused call from separate evaluate and gradient).  The returned
    Diagnostic names each missing method and the consumer that wants it; it is
    returned, not raised, so callers can probe without try/except.
    """
    missing = []
    for flag, (probe, method_name) in _REQUIREMENT_PROBES.items():
        if getattr(required, flag) and not probe(provided):
            missing.append(method_name)
    if not missing:
        return None
    return Diagnostic(
        f"{consumer} requires {', '.join(missing)}, which the objective neither "
        f"provides nor allows to be inferred"
    )


class ObjectiveAdapter:
    """Uniform front for an objective: inference, call counting, event reporting.

    Optimizers only ever talk to the adapter.  It fills in ``evaluate`` from
    part sums and ``evaluate_with_gradient`` from separate calls when the
    objective lacks the direct method, keeps ``evaluate_calls`` and
    ``gradient_calls`` tallies, and reports each underlying objective call to
    the optional ``events`` sink (a ``CallbackList``).

    Counting rules: a part-window call of ``count`` parts costs ``count``
    evaluations (or gradients); a fused call costs one of each.
    """

    def __init__(self, objective, events=None):
        self.objective = objective
        self.capabilities = ObjectiveCapabilities.of(objective)
        self.events = events
        self.evaluate_calls = 0
        self.gradient_calls = 0

    # ------------------------------------------------------------------
    def evaluate(self, x):
        caps = self.capabilities
        if caps.evaluate:
            self.evaluate_calls += 1
            value = float(self.objective.evaluate(x))
        elif caps.part_evaluate:
            # Full value as the sum over all parts, one window spanning them.
            n = caps.num_parts
            self.evaluate_calls += n
            value = float(self.objective.evaluate_parts(x, 0, n))
        else:
            raise Diagnostic(
                f"{type(self.objective).__name__} provides neither evaluate nor evaluate_parts"
            )
        self._emit_evaluate(value)
        return value

    def gradient(self, x):
        if not self.capabilities.gradient:
            raise Diagnostic(f"{type(self.objective).__name__} provides no gradient")
        self.gradient_calls += 1
        g = self._checked_gradient(self.objective.gradient(x), x, "gradient")
        self._emit_gradient(g)
        return g

    def evaluate_with_gradient(self, x):
        caps = self.capabilities
        if caps.evaluate_with_gradient:
            self.evaluate_calls += 1
            self.gradient_calls += 1
            value, g = self.objective.evaluate_with_gradient(x)
            value = float(value)
            g = self._checked_gradient(g, x, "evaluate_with_gradient")
            self._emit_evaluate(value)
            self._emit_gradient(g)
            return value, g
        # Inferred from the separate methods; both report and count as usual.
        value = self.evaluate(x)
        return value, self.gradient(x)

    def evaluate_parts(self, x, first, count):
        if not self.capabilities.part_evaluate:
            raise Diagnostic(f"{type(self.objective).__name__} provides no evaluate_parts")
        self.evaluate_calls += count
        value = float(self.objective.evaluate_parts(x, first, count))
        self._emit_evaluate(value)
        return value

    def gradient_parts(self, x, first, count):
        if not self.capabilities.part_gradient:
            raise Diagnostic(f"{type(self.objective).__name__} provides no gradient_parts")
        self.gradient_calls += count
        g = self._checked_gradient(
            self.objective.gradient_parts(x, first, count), x, "gradient_parts"
        )
        self._emit_gradient(g)
        return g

    @property
    def num_parts(self):
        n = self.capabilities.num_parts
        if n is None:
            raise Diagnostic(f"{type(self.objective).__name__} is not separable")
        return n

    # ------------------------------------------------------------------
    def _checked_gradient(self, g, x, method):
        g = np.asarray(g)
        if g.shape != x.shape:
            raise Diagnostic(
                f"{type(self.objective).__name__}.{method} returned gradient of shape "
                f"{g.shape} for parameters of shape {x.shape}"
            )
        return g

    def _emit_evaluate(self, value):
        if self.events:
            from .callbacks import EvaluateCalled

            self.events.dispatch(EvaluateCalled(value=value))

    def _emit_gradient(self, g):
        if self.events:
            from .callbacks import GradientCalled

            self.events.dispatch(GradientCalled(norm=float(np.max(np.abs(g)))))


def finite_difference_gradient(objective, x, step=None):
    """Central-difference gradient, one coordinate at a time.

    ``step`` defaults to 1e-6 * (1 + max|x|) so the stencil scales with the
    iterate.  Only objective evaluations are used, so this serves as an
    independent check of any analytic gradient.  Cost is 2 * x.size
    evaluations.
    """
    adapter = (
        objective if isinstance(objective, ObjectiveAdapter) else ObjectiveAdapter(objective)
    )
    x = np.asarray(x)
    if step is None:
        step = 1e-6 * (1.0 + float(np.max(np.abs(x))))
    if step <= 0:
        raise Diagnostic(f"finite difference step must be > 0, got {step}")
    g = np.empty_like(x, dtype=np.float64)
    for index in np.ndindex(x.shape):
        forward = x.astype(np.float64, copy=True)
        backward = x.astype(np.float64, copy=True)
        forward[index] += step
        backward[index] -= step
        g[index] = (adapter.evaluate(forward) - adapter.evaluate(backward)) / (2.0 * step)
    return g


class TerminationReason(Enum):
    """Why an optimizer stopped.  Exactly one per result."""

    GRADIENT_NORM_TOLERANCE = "gradient_norm_tolerance"
    OBJECTIVE_IMPROVEMENT_TOLERANCE = "objective_improvement_tolerance"
    MAX_ITERATIONS = "max_iterations"
    CALLBACK_REQUESTED = "callback_requested"
    LINE_SEARCH_FAILURE = "line_search_failure"
    STEP_SIZE_UNDERFLOW = "step_size_underflow"


@dataclass
class OptimizationResult:
    """Outcome of one optimize() run.

    ``final_objective`` is the value at the returned parameters (best-ever
    iterate for simulated annealing, last accepted iterate otherwise).
    ``iterations`` counts completed steps: accepted line-search steps for
    L-BFGS, parameter updates for the descent methods, proposed moves for
    annealing.  Call counters come from the adapter, so window calls count
    once per part and fused calls count one evaluation plus one gradient.
    """

    final_objective: float
    iterations: int
    termination: TerminationReason
    elapsed_seconds: float
    evaluate_calls: int
    gradient_calls: int
