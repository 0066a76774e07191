"""
Watching and steering a run with callbacks
==========================================

Callbacks receive typed events (run begin/end, steps, epoch boundaries,
raw evaluate/gradient calls) and any of them can stop the run by
returning a terminate decision.
"""

import io

import numpy as np

from numopt import (
    CallbackDecision,
    EarlyStopping,
    GradientDescent,
    LBFGS,
    ProgressPrinter,
    StepTaken,
    TimeLimit,
    TraceRecorder,
    parse_progress_line,
)
from numopt.problems import LinearRegression, generate_noisy_linear

X, y, _ = generate_noisy_linear(d=4, n=200, noise_scale=1.0, seed=3)
objective = LinearRegression(X, y)
x0 = np.zeros((4, 1))

# A progress line per iteration, here thinned to every other one and sent
# to a buffer instead of stdout so we can show the format.
buffer = io.StringIO()
LBFGS().optimize(objective, x0, callbacks=[ProgressPrinter(stream=buffer, period=2)])
lines = buffer.getvalue().strip().split("\n")
print("progress lines look like:", lines[0])
print("they parse back:", parse_progress_line(lines[0]))

# TraceRecorder keeps (iteration, objective) pairs for later inspection.
trace = TraceRecorder()
LBFGS().optimize(objective, x0, callbacks=[trace])
print("first three trace entries:", trace.trace[:3])

# EarlyStopping terminates once the objective stops improving.
stopper = EarlyStopping(patience=5, min_delta=1e-3)
_, result = GradientDescent(step_size=1e-4).optimize(objective, x0, callbacks=[stopper])
print("early stopping ended the run as:", result.termination.value,
      "after", result.iterations, "iterations")

# A hand-rolled callback is just a callable.  This one stops at step 10.
def stop_at_ten(event):
    if isinstance(event, StepTaken) and event.iteration >= 10:
        return CallbackDecision.TERMINATE


_, result = GradientDescent(step_size=1e-4).optimize(objective, x0, callbacks=[stop_at_ten])
print("manual stop:", result.iterations, "iterations,", result.termination.value)

# TimeLimit does the same based on wall-clock seconds.  Tolerances are
# zeroed here so nothing else can end this run first.
_, result = GradientDescent(
    step_size=1e-6, max_iterations=10**8,
    min_gradient_norm=0.0, min_objective_improvement=0.0,
).optimize(objective, x0, callbacks=[TimeLimit(0.05)])
print("time limited run:", result.termination.value,
      f"after {result.elapsed_seconds:.3f}s")
