"""Update policies, batch scheduling, and the SGD loop."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from numopt import (
    AdamUpdate,
    BeginEpoch,
    BeginOptimization,
    CallbackDecision,
    Diagnostic,
    EndEpoch,
    EndOptimization,
    GradientDescent,
    MomentumUpdate,
    SGD,
    StepTaken,
    TerminationReason,
    VanillaUpdate,
)
from numopt.problems import (
    LinearRegression,
    SeparableLinearRegression,
    generate_noisy_linear,
)

# Epoch-mean objective of the frozen Adam run below, recorded once and
# pinned so behavioural drift shows up as a test failure.
ADAM_REFERENCE_OBSERVED = 0.009125663599890673


class TestVanillaUpdate:
    def test_increment_is_negated_scaled_gradient(self):
        policy = VanillaUpdate()
        state = policy.initialize(np.zeros(2))
        increment = policy.step(state, np.array([2.0, -4.0]), 0.1)
        assert np.array_equal(increment, [-0.2, 0.4])
        assert state is None


class TestMomentumUpdate:
    def test_first_step_matches_vanilla(self):
        policy = MomentumUpdate(momentum=0.9)
        velocity = policy.initialize(np.zeros(2))
        increment = policy.step(velocity, np.array([1.0, 0.0]), 0.1)
        assert_allclose(increment, [-0.1, 0.0], rtol=1e-15)

    def test_constant_gradient_velocity_approaches_geometric_limit(self):
        # v_k = (1 - mu^k)/(1 - mu) * g, so the increment tends to
        # -step * g / (1 - mu).
        policy = MomentumUpdate(momentum=0.9)
        g = np.array([1.0, -2.0])
        velocity = policy.initialize(g)
        for _ in range(200):
            increment = policy.step(velocity, g, 0.1)
        assert_allclose(increment, -0.1 * g / 0.1, rtol=1e-8)

    def test_zero_gradient_decays_velocity(self):
        policy = MomentumUpdate(momentum=0.9)
        velocity = policy.initialize(np.zeros(1))
        policy.step(velocity, np.array([1.0]), 0.1)
        increment = policy.step(velocity, np.array([0.0]), 0.1)
        assert_allclose(increment, [-0.1 * 0.9], rtol=1e-15)

    def test_momentum_validated(self):
        with pytest.raises(Diagnostic, match="momentum"):
            MomentumUpdate(momentum=1.0)


class TestAdamUpdate:
    def test_first_step_direction_and_magnitude(self):
        # Bias correction makes m_hat = g and v_hat = g*g on step one, so
        # each coordinate moves -step * g / (|g| + eps).
        policy = AdamUpdate()
        state = policy.initialize(np.zeros(3))
        g = np.array([0.5, -2.0, 1e-3])
        increment = policy.step(state, g, 0.1)
        expected = -0.1 * g / (np.abs(g) + 1e-8)
        assert_allclose(increment, expected, rtol=1e-12)

    def test_zero_gradient_coordinate_does_not_move(self):
        policy = AdamUpdate()
        state = policy.initialize(np.zeros(2))
        increment = policy.step(state, np.array([1.0, 0.0]), 0.1)
        assert increment[1] == 0.0

    def test_constant_gradient_keeps_the_first_step_size(self):
        # With a constant gradient the bias corrections cancel exactly at
        # every step, so the increment never changes.
        policy = AdamUpdate()
        g = np.array([3.0, -0.25])
        state = policy.initialize(g)
        first = policy.step(state, g, 0.1)
        for _ in range(5):
            later = policy.step(state, g, 0.1)
        assert_allclose(later, first, rtol=1e-12)

    def test_coordinate_steps_bounded_by_step_size(self):
        rng = np.random.default_rng(11)
        policy = AdamUpdate()
        state = policy.initialize(np.zeros(4))
        for _ in range(50):
            increment = policy.step(state, rng.normal(size=4), 0.05)
            assert np.max(np.abs(increment)) <= 0.05 * (1 + 1e-12)

    def test_config_validated(self):
        with pytest.raises(Diagnostic, match="beta1"):
            AdamUpdate(beta1=1.0)
        with pytest.raises(Diagnostic, match="beta2"):
            AdamUpdate(beta2=-0.1)
        with pytest.raises(Diagnostic, match="epsilon"):
            AdamUpdate(epsilon=0.0)


class RecordingParts:
    """Separable objective that logs every window it is asked about."""

    def __init__(self, inner):
        self.inner = inner
        self.windows = []

    @property
    def num_parts(self):
        return self.inner.num_parts

    def evaluate_parts(self, x, first, count):
        self.windows.append((first, count))
        return self.inner.evaluate_parts(x, first, count)

    def gradient_parts(self, x, first, count):
        return self.inner.gradient_parts(x, first, count)


class TwoLinearParts:
    """Two parts with gradients 1 and 3 on a single coordinate."""

    slopes = (1.0, 3.0)

    @property
    def num_parts(self):
        return 2

    def evaluate_parts(self, x, first, count):
        return float(sum(self.slopes[j] * x[0] for j in range(first, first + count)))

    def gradient_parts(self, x, first, count):
        return np.array([sum(self.slopes[first:first + count])])


def mean_form(separable):
    n = separable.num_parts

    class MeanForm:
        def evaluate(self, x):
            return separable.evaluate_parts(x, 0, n) / n

        def gradient(self, x):
            return separable.gradient_parts(x, 0, n) / n

    return MeanForm()


class TestSgdLoop:
    def setup_method(self):
        self.X, self.y, _ = generate_noisy_linear(3, 100, noise_scale=0.5, seed=1)
        self.objective = SeparableLinearRegression(self.X, self.y)

    def test_single_step_averages_the_window_gradient(self):
        x, result = SGD(
            step_size=0.1, batch_size=2, max_iterations=1, shuffle=False
        ).optimize(TwoLinearParts(), np.array([1.0]))
        # averaged gradient (1+3)/2 = 2, so one step moves by -0.2
        assert x[0] == 1.0 - 0.2
        assert result.iterations == 1
        assert result.termination == TerminationReason.MAX_ITERATIONS
        assert result.final_objective == 2.0  # batch value 4 over 2 parts

    def test_windows_are_contiguous_and_keep_the_short_tail(self):
        recorder = RecordingParts(self.objective)
        SGD(batch_size=32, max_iterations=4, shuffle=False).optimize(
            recorder, np.zeros((3, 1))
        )
        assert recorder.windows == [(0, 32), (32, 32), (64, 32), (96, 4)]

    def test_shuffled_visit_order_is_seeded_permutation(self):
        recorder = RecordingParts(self.objective)
        SGD(batch_size=32, max_iterations=4, shuffle=True, seed=9).optimize(
            recorder, np.zeros((3, 1))
        )
        starts = [0, 32, 64, 96]
        expected = [starts[i] for i in np.random.default_rng(9).permutation(4)]
        assert [first for first, _ in recorder.windows] == expected

    def test_same_seed_is_bitwise_reproducible(self):
        config = dict(step_size=0.01, batch_size=16, max_iterations=50, seed=4)
        x1, r1 = SGD(**config).optimize(self.objective, np.zeros((3, 1)))
        x2, r2 = SGD(**config).optimize(self.objective, np.zeros((3, 1)))
        assert np.array_equal(x1, x2)
        assert r1.final_objective == r2.final_objective

    def test_different_seeds_visit_batches_differently(self):
        x1, _ = SGD(batch_size=16, max_iterations=50, seed=4).optimize(
            self.objective, np.zeros((3, 1))
        )
        x2, _ = SGD(batch_size=16, max_iterations=50, seed=5).optimize(
            self.objective, np.zeros((3, 1))
        )
        assert not np.array_equal(x1, x2)

    def test_full_batch_vanilla_equals_gradient_descent_bitwise(self):
        # One window covering every part plus the vanilla policy performs
        # the exact float operations of fixed-step descent on the mean
        # objective, so 100 steps agree to the last bit.
        x_sgd, r_sgd = SGD(
            step_size=0.05,
            batch_size=self.objective.num_parts,
            max_iterations=100,
            tolerance=0.0,
        ).optimize(self.objective, np.zeros((3, 1)))
        x_gd, r_gd = GradientDescent(
            step_size=0.05,
            max_iterations=100,
            min_gradient_norm=0.0,
            min_objective_improvement=0.0,
        ).optimize(mean_form(self.objective), np.zeros((3, 1)))
        assert r_sgd.iterations == r_gd.iterations == 100
        assert np.array_equal(x_sgd, x_gd)

    def test_constant_objective_stops_on_epoch_tolerance(self):
        class Flat:
            num_parts = 6

            def evaluate_parts(self, x, first, count):
                return float(count)

            def gradient_parts(self, x, first, count):
                return np.zeros_like(x)

        _, result = SGD(batch_size=2, tolerance=1e-5).optimize(Flat(), np.zeros(2))
        assert result.termination == TerminationReason.OBJECTIVE_IMPROVEMENT_TOLERANCE
        assert result.iterations == 6  # two complete epochs of three windows
        assert result.final_objective == 1.0

    def test_epoch_events_bracket_step_events(self):
        structural = (BeginOptimization, BeginEpoch, StepTaken, EndEpoch, EndOptimization)
        events = []

        def capture(event):
            if isinstance(event, structural):
                events.append(event)

        SGD(batch_size=3, max_iterations=4, shuffle=False).optimize(
            TwoParts6(), np.zeros(1), callbacks=[capture]
        )
        kinds = [type(e).__name__ for e in events]
        assert kinds == [
            "BeginOptimization",
            "BeginEpoch",
            "StepTaken",
            "StepTaken",
            "EndEpoch",
            "BeginEpoch",
            "StepTaken",
            "StepTaken",
            "EndEpoch",
            "EndOptimization",
        ]
        assert events[1].epoch == 1
        assert events[5].epoch == 2

    def test_final_objective_is_epoch_mean_after_complete_epoch(self):
        seen = []

        def watch(event):
            if isinstance(event, EndEpoch):
                seen.append(event.mean_objective)

        _, result = SGD(batch_size=16, max_iterations=70, seed=2).optimize(
            self.objective, np.zeros((3, 1)), callbacks=[watch]
        )
        # 70 steps = 10 complete epochs of 7 windows
        assert result.final_objective == seen[-1]

    def test_final_objective_is_last_batch_mean_mid_epoch(self):
        seen = []

        def watch(event):
            if isinstance(event, StepTaken):
                seen.append(event.objective)

        _, result = SGD(batch_size=16, max_iterations=10, seed=2).optimize(
            self.objective, np.zeros((3, 1)), callbacks=[watch]
        )
        assert result.iterations == 10
        assert result.final_objective == seen[-1]

    def test_adam_halves_a_noisy_regression(self):
        X, y, _ = generate_noisy_linear(2, 100, noise_scale=0.1, seed=3)
        objective = SeparableLinearRegression(X, y)
        full = LinearRegression(X, y)
        initial = full.evaluate(np.zeros((2, 1)))
        x, result = SGD(
            step_size=0.05,
            batch_size=25,
            max_iterations=200,
            tolerance=0.0,
            seed=3,
            update=AdamUpdate(),
        ).optimize(objective, np.zeros((2, 1)))
        assert result.iterations == 200
        assert full.evaluate(x) < 0.5 * initial
        assert_allclose(result.final_objective, ADAM_REFERENCE_OBSERVED, rtol=1e-12)

    def test_momentum_policy_runs_and_improves(self):
        full = LinearRegression(self.X, self.y)
        initial = full.evaluate(np.zeros((3, 1)))
        x, _ = SGD(
            step_size=0.01,
            batch_size=16,
            max_iterations=300,
            tolerance=0.0,
            update=MomentumUpdate(),
        ).optimize(self.objective, np.zeros((3, 1)))
        assert full.evaluate(x) < initial

    def test_callback_terminate_mid_epoch(self):
        def stop(event):
            if isinstance(event, StepTaken) and event.iteration == 5:
                return CallbackDecision.TERMINATE

        _, result = SGD(batch_size=16).optimize(
            self.objective, np.zeros((3, 1)), callbacks=[stop]
        )
        assert result.iterations == 5
        assert result.termination == TerminationReason.CALLBACK_REQUESTED

    def test_requires_part_methods(self):
        class FullOnly:
            def evaluate(self, x):
                return 0.0

            def gradient(self, x):
                return np.zeros_like(x)

        with pytest.raises(Diagnostic, match="evaluate_parts"):
            SGD().optimize(FullOnly(), np.zeros(2))

    def test_config_validation(self):
        with pytest.raises(Diagnostic, match="batch_size"):
            SGD(batch_size=0)
        with pytest.raises(Diagnostic, match="step_size"):
            SGD(step_size=-1.0)


class TwoParts6:
    """Six parts in two windows of three; values depend only on the window."""

    num_parts = 6

    def evaluate_parts(self, x, first, count):
        return float(first + count)

    def gradient_parts(self, x, first, count):
        return np.zeros_like(x)
