"""Run setup and teardown shared by every optimizer."""

from __future__ import annotations

import time

from ..callbacks import BeginOptimization, CallbackList, EndOptimization
from ..core import (
    ObjectiveAdapter,
    ObjectiveCapabilities,
    OptimizationResult,
    as_parameters,
    check_requirements,
)


def prepare_run(objective, x0, callbacks, requires, consumer):
    """Validate parameters and capabilities, then open the run.

    The capability check happens before any objective call, so an unusable
    pairing fails fast with a Diagnostic instead of mid-run.  Returns the
    working parameter array, the adapter, the callback list (already sent
    BeginOptimization), and the start time.
    """
    x = as_parameters(x0)
    diagnostic = check_requirements(ObjectiveCapabilities.of(objective), requires, consumer)
    if diagnostic is not None:
        raise diagnostic
    events = CallbackList(callbacks)
    adapter = ObjectiveAdapter(objective, events=events)
    started = time.perf_counter()
    events.dispatch(BeginOptimization())
    return x, adapter, events, started


def finish_run(adapter, events, started, final_objective, iterations, termination):
    """Close the run: EndOptimization, then the assembled result."""
    events.dispatch(EndOptimization())
    return OptimizationResult(
        final_objective=float(final_objective),
        iterations=iterations,
        termination=termination,
        elapsed_seconds=time.perf_counter() - started,
        evaluate_calls=adapter.evaluate_calls,
        gradient_calls=adapter.gradient_calls,
    )
