"""
Minimizing a custom objective in a few lines
============================================

Any object with an ``evaluate`` method (and a ``gradient`` method for the
gradient-based solvers) can be handed straight to an optimizer.
"""

import numpy as np

from numopt import LBFGS, GradientDescent


# An objective is just a class.  This one is a shifted quadratic bowl with
# its minimum at (1, -2).
class Bowl:
    def evaluate(self, x):
        return float((x[0] - 1.0) ** 2 + 10.0 * (x[1] + 2.0) ** 2)

    def gradient(self, x):
        return np.array([2.0 * (x[0] - 1.0), 20.0 * (x[1] + 2.0)])


x0 = np.zeros(2)

# The limited-memory solver needs no tuning for a problem this small.
x, result = LBFGS().optimize(Bowl(), x0)
print("L-BFGS found        ", x)
print("objective there     ", result.final_objective)
print("iterations          ", result.iterations)
print("stopped because     ", result.termination.value)

# Fixed-step descent works too, it just takes more steps.
x, result = GradientDescent(step_size=0.04).optimize(Bowl(), x0)
print("gradient descent    ", x, "after", result.iterations, "iterations")

# The result also carries the work done, useful when comparing solvers.
print("evaluations         ", result.evaluate_calls)
print("gradient calls      ", result.gradient_calls)
