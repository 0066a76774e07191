"""
What an optimizer can learn about your objective
================================================

Objectives are duck typed: capabilities are read off the methods you
define, some gaps can be filled in automatically, and anything still
missing is reported by name before the run starts.
"""

import numpy as np

from numopt import (
    LBFGS,
    Diagnostic,
    ObjectiveAdapter,
    ObjectiveCapabilities,
    SimulatedAnnealing,
    check_requirements,
)
from numopt.problems import SeparableLinearRegression, generate_noisy_linear

X, y, phi_true = generate_noisy_linear(d=3, n=120, noise_scale=0.5, seed=0)

# SeparableLinearRegression only defines the part-wise interface:
# num_parts, evaluate_parts, gradient_parts.  No full evaluate at all.
objective = SeparableLinearRegression(X, y)
capabilities = ObjectiveCapabilities.of(objective)
print("declared capabilities:", capabilities)

# The adapter fills in what can be derived: a full evaluation is the sum
# over all parts, so asking for evaluate works even though the class never
# defined it.  Derived calls are counted against the parts they touch.
adapter = ObjectiveAdapter(objective)
point = np.zeros((3, 1))
print("inferred evaluate:", adapter.evaluate(point))
print("part evaluations charged:", adapter.evaluate_calls)

# Gradients are never guessed.  Asking a gradient-based solver to run on
# an object without a gradient method fails up front, naming the gap.
class EvaluateOnly:
    def evaluate(self, x):
        return float(np.vdot(x, x))


problem = check_requirements(
    ObjectiveCapabilities.of(EvaluateOnly()), LBFGS.requires, consumer="L-BFGS"
)
print("requirement check says:", problem)

try:
    LBFGS().optimize(EvaluateOnly(), np.ones(2))
except Diagnostic as diagnostic:
    print("optimize refused:", diagnostic)

# The same object is perfectly fine for a gradient-free method.
x, result = SimulatedAnnealing(seed=0, max_iterations=5000).optimize(
    EvaluateOnly(), np.ones(2)
)
print("annealing got to", x, "with objective", result.final_objective)
