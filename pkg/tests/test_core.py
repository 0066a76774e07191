"""Capability detection, requirement checking, inference, and counting."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from numopt import (
    Diagnostic,
    ObjectiveAdapter,
    ObjectiveCapabilities,
    as_parameters,
    check_requirements,
    finite_difference_gradient,
)

# Hand-checkable instance: X = [1 2] (d=1, n=2), y = (1, 2).  At phi = 0 the
# residual is (-1, -2), so f = 5 and the gradient is 2*(1*-1 + 2*-2) = -10.
X_TINY = np.array([[1.0, 2.0]])
Y_TINY = np.array([1.0, 2.0])


class FullObjective:
    """evaluate + gradient only."""

    def evaluate(self, phi):
        r = X_TINY.T @ phi.ravel() - Y_TINY
        return float(r @ r)

    def gradient(self, phi):
        r = X_TINY.T @ phi.ravel() - Y_TINY
        return (2.0 * (X_TINY @ r)).reshape(phi.shape)


class PartsOnlyObjective:
    """Separable pieces only; full evaluation must be inferred.

    The window sum is an explicit sequential loop so the summation order is
    the index order, which the inference contract relies on.
    """

    num_parts = 2

    def evaluate_parts(self, phi, first, count):
        total = 0.0
        for i in range(first, first + count):
            r = float(X_TINY[:, i] @ phi.ravel()) - Y_TINY[i]
            total += r * r
        return total

    def gradient_parts(self, phi, first, count):
        g = np.zeros_like(phi)
        for i in range(first, first + count):
            r = float(X_TINY[:, i] @ phi.ravel()) - Y_TINY[i]
            g += (2.0 * r * X_TINY[:, i]).reshape(phi.shape)
        return g


class FusedObjective:
    def evaluate_with_gradient(self, phi):
        r = X_TINY.T @ phi.ravel() - Y_TINY
        return float(r @ r), (2.0 * (X_TINY @ r)).reshape(phi.shape)


class TestCapabilities:
    def test_detects_what_exists(self):
        caps = ObjectiveCapabilities.of(FullObjective())
        assert caps.evaluate and caps.gradient
        assert not caps.evaluate_with_gradient
        assert not caps.part_evaluate and not caps.part_gradient
        assert caps.num_parts is None

    def test_detects_parts(self):
        caps = ObjectiveCapabilities.of(PartsOnlyObjective())
        assert caps.part_evaluate and caps.part_gradient
        assert caps.num_parts == 2
        assert not caps.evaluate

    def test_parts_without_num_parts_is_diagnostic(self):
        class Broken:
            def evaluate_parts(self, phi, first, count):
                return 0.0

        with pytest.raises(Diagnostic, match="num_parts"):
            ObjectiveCapabilities.of(Broken())

    def test_nonpositive_num_parts_is_diagnostic(self):
        class Broken:
            num_parts = 0

            def evaluate_parts(self, phi, first, count):
                return 0.0

        with pytest.raises(Diagnostic, match="num_parts"):
            ObjectiveCapabilities.of(Broken())

    def test_non_callable_attributes_do_not_count(self):
        class Impostor:
            evaluate = 3.0

        assert not ObjectiveCapabilities.of(Impostor()).evaluate


class TestCheckRequirements:
    def test_satisfied_returns_none(self):
        caps = ObjectiveCapabilities.of(FullObjective())
        need = ObjectiveCapabilities(evaluate=True, gradient=True)
        assert check_requirements(caps, need) is None

    def test_missing_gradient_named(self):
        caps = ObjectiveCapabilities.of(PartsOnlyObjective())
        need = ObjectiveCapabilities(evaluate=True, gradient=True)
        diagnostic = check_requirements(caps, need, consumer="L-BFGS")
        assert diagnostic is not None
        assert "gradient" in str(diagnostic)
        assert "L-BFGS" in str(diagnostic)

    def test_full_evaluate_satisfied_by_parts(self):
        caps = ObjectiveCapabilities.of(PartsOnlyObjective())
        assert check_requirements(caps, ObjectiveCapabilities(evaluate=True)) is None

    def test_fused_satisfied_by_pair(self):
        caps = ObjectiveCapabilities.of(FullObjective())
        need = ObjectiveCapabilities(evaluate_with_gradient=True)
        assert check_requirements(caps, need) is None

    def test_fused_not_satisfied_by_evaluate_alone(self):
        class EvaluateOnly:
            def evaluate(self, phi):
                return 0.0

        caps = ObjectiveCapabilities.of(EvaluateOnly())
        need = ObjectiveCapabilities(evaluate_with_gradient=True)
        assert check_requirements(caps, need) is not None

    def test_gradient_never_inferred_from_fused(self):
        # A fused method implies a full evaluate+gradient *call*, but the
        # standalone gradient requirement is about the standalone method.
        caps = ObjectiveCapabilities.of(FusedObjective())
        assert check_requirements(caps, ObjectiveCapabilities(gradient=True)) is not None
        assert (
            check_requirements(caps, ObjectiveCapabilities(evaluate_with_gradient=True)) is None
        )

    def test_part_requirements_need_real_parts(self):
        caps = ObjectiveCapabilities.of(FullObjective())
        need = ObjectiveCapabilities(part_evaluate=True, part_gradient=True)
        diagnostic = check_requirements(caps, need, consumer="SGD")
        assert "evaluate_parts" in str(diagnostic)
        assert "gradient_parts" in str(diagnostic)

    def test_monotone_in_requirements(self):
        # If a requirement set passes, every subset passes.
        rng = np.random.default_rng(0)
        flags = ("evaluate", "gradient", "evaluate_with_gradient", "part_evaluate", "part_gradient")
        providers = [FullObjective(), PartsOnlyObjective(), FusedObjective()]
        for provider in providers:
            caps = ObjectiveCapabilities.of(provider)
            for _ in range(40):
                required = {flag: bool(rng.integers(2)) for flag in flags}
                if check_requirements(caps, ObjectiveCapabilities(**required)) is None:
                    for dropped in flags:
                        subset = dict(required)
                        subset[dropped] = False
                        assert check_requirements(caps, ObjectiveCapabilities(**subset)) is None


class TestAdapterInference:
    def test_full_value_inferred_from_parts(self):
        adapter = ObjectiveAdapter(PartsOnlyObjective())
        assert adapter.evaluate(np.zeros(1)) == 5.0
        # The inferred call spans all parts, so it costs num_parts evaluations.
        assert adapter.evaluate_calls == 2

    def test_inferred_sum_matches_sequential_order_bitwise(self):
        rng = np.random.default_rng(3)
        objective = PartsOnlyObjective()
        adapter = ObjectiveAdapter(objective)
        for _ in range(20):
            phi = rng.uniform(-2.0, 2.0, size=1)
            expected = 0.0
            for i in range(2):
                expected += objective.evaluate_parts(phi, i, 1)
            # Same index order, same additions: identical bits.
            assert adapter.evaluate(phi) == expected

    def test_fused_inferred_from_pair(self):
        adapter = ObjectiveAdapter(FullObjective())
        value, gradient = adapter.evaluate_with_gradient(np.zeros(1))
        assert value == 5.0
        assert_allclose(gradient, [-10.0])
        assert adapter.evaluate_calls == 1
        assert adapter.gradient_calls == 1

    def test_direct_fused_counts_one_each(self):
        adapter = ObjectiveAdapter(FusedObjective())
        value, gradient = adapter.evaluate_with_gradient(np.zeros(1))
        assert value == 5.0
        assert_allclose(gradient, [-10.0])
        assert adapter.evaluate_calls == 1
        assert adapter.gradient_calls == 1

    def test_gradient_not_inferred(self):
        adapter = ObjectiveAdapter(PartsOnlyObjective())
        with pytest.raises(Diagnostic, match="gradient"):
            adapter.gradient(np.zeros(1))

    def test_window_calls_count_window_size(self):
        adapter = ObjectiveAdapter(PartsOnlyObjective())
        adapter.evaluate_parts(np.zeros(1), 0, 2)
        adapter.gradient_parts(np.zeros(1), 1, 1)
        assert adapter.evaluate_calls == 2
        assert adapter.gradient_calls == 1

    def test_gradient_shape_mismatch_is_diagnostic(self):
        class WrongShape:
            def evaluate(self, x):
                return 0.0

            def gradient(self, x):
                return np.zeros(3)

        adapter = ObjectiveAdapter(WrongShape())
        with pytest.raises(Diagnostic, match="shape"):
            adapter.gradient(np.zeros((2, 1)))


class TestAsParameters:
    def test_copies_input(self):
        x0 = np.ones(3)
        x = as_parameters(x0)
        x[0] = 99.0
        assert x0[0] == 1.0

    def test_preserves_float32(self):
        assert as_parameters(np.ones(2, dtype=np.float32)).dtype == np.float32

    def test_promotes_integers_to_float64(self):
        assert as_parameters(np.array([1, 2])).dtype == np.float64

    def test_accepts_column_matrix(self):
        assert as_parameters(np.ones((4, 1))).shape == (4, 1)

    @pytest.mark.parametrize("bad", [np.array([1.0, np.nan]), np.array([np.inf, 0.0])])
    def test_rejects_non_finite(self, bad):
        with pytest.raises(Diagnostic, match="NaN|infinity"):
            as_parameters(bad)

    def test_rejects_wrong_rank(self):
        with pytest.raises(Diagnostic, match="shape"):
            as_parameters(np.ones((2, 2, 2)))

    def test_rejects_empty(self):
        with pytest.raises(Diagnostic, match="non-empty"):
            as_parameters(np.array([]))


class TestFiniteDifferences:
    def test_quadratic_gradient(self):
        class Quadratic:
            def evaluate(self, x):
                return float(np.vdot(x, x))

        g = finite_difference_gradient(Quadratic(), np.array([1.0, 2.0]))
        assert_allclose(g, [2.0, 4.0], rtol=1e-7)

    def test_matches_hand_linreg_gradient(self):
        g = finite_difference_gradient(FullObjective(), np.zeros(1))
        assert_allclose(g, [-10.0], rtol=1e-8)

    def test_works_through_part_inference(self):
        g = finite_difference_gradient(PartsOnlyObjective(), np.zeros(1))
        assert_allclose(g, [-10.0], rtol=1e-8)

    def test_costs_two_evaluations_per_coordinate(self):
        class Quadratic:
            def evaluate(self, x):
                return float(np.vdot(x, x))

        adapter = ObjectiveAdapter(Quadratic())
        finite_difference_gradient(adapter, np.ones((3, 1)))
        assert adapter.evaluate_calls == 6

    def test_rejects_bad_step(self):
        with pytest.raises(Diagnostic, match="step"):
            finite_difference_gradient(FullObjective(), np.zeros(1), step=0.0)
