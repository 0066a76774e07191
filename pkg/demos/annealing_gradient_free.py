"""
Gradient-free search on a rugged objective
==========================================

Simulated annealing needs nothing but evaluate, so it handles objectives
that are noisy, non-smooth, or simply have no gradient code.  Hot early
temperatures accept some uphill moves, which is what carries the search
past local minima that would trap a greedy method.
"""

import numpy as np

from numopt import SimulatedAnnealing


# A classic trap: cosine ripples over a shallow bowl.  Plenty of local
# minima; the global minimum is at the origin.
class Rippled:
    def evaluate(self, x):
        return float(np.sum(x * x) / 20.0 - np.cos(3.0 * x[0]) - np.cos(3.0 * x[1]) + 2.0)


x0 = np.array([2.5, -2.1])  # starts inside a side ripple
print("objective at start:", Rippled().evaluate(x0))
print("global minimum:    ", Rippled().evaluate(np.zeros(2)), "at the origin")

# The temperature should be on the scale of the barriers to climb (the
# ripples are about 2 deep) and the moves large enough to explore.
annealer = SimulatedAnnealing(
    initial_temperature=1.0, cooling_factor=0.95, move_scale=0.3,
    seed=11, max_iterations=60000,
)
best, result = annealer.optimize(Rippled(), x0)
print()
print("best point found:  ", best.round(4))
print("best objective:    ", result.final_objective)
print("moves proposed:    ", result.iterations)
print("evaluations:       ", result.evaluate_calls)
print("gradient calls:    ", result.gradient_calls)

# A purely greedy run from the same start, for contrast: an arbitrarily
# cold start temperature rejects every uphill move, so the search settles
# into the nearest ripple instead of the global minimum.
greedy = SimulatedAnnealing(
    initial_temperature=1e-12, move_scale=0.3, seed=11, max_iterations=60000
)
best_greedy, result_greedy = greedy.optimize(Rippled(), x0)
print()
print("greedy run stays at:", best_greedy.round(4),
      "objective", result_greedy.final_objective)
