"""SMO training: analytic solutions, optimizer invariants, and the
trained-classifier interface."""

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from hazardsvm import (
    ConvergenceError,
    DegenerateLabelsError,
    KernelSvmClassifier,
    ShapeError,
    dual_objective_value,
    gram_matrix,
    kkt_violation_value,
    principled_bias,
)

from conftest import make_blobs
from qp_oracle import qp_reference_max

XOR_X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
XOR_Y = np.array([1, 1, -1, -1])


def overlapping_problem():
    """Heavily overlapped classes that cannot meet a 1e-12 tolerance in two
    sweeps; used to force a non-convergent run."""
    X, y = make_blobs(40, 0.5, 0.1, seed=1)
    return X, y


class TestAnalyticSolutions:
    def test_two_point_linear_is_exact(self):
        # maximize 2a - 2a^2 -> a = 1/2, objective 1/2, zero bias.
        clf = KernelSvmClassifier(kernel="linear", c=10.0)
        clf.fit([[-1.0], [1.0]], [-1, 1])
        assert np.array_equal(np.abs(clf.dual_coef_), [0.5, 0.5])
        assert clf.intercept_ == 0.0
        assert clf.dual_objective() == 0.5
        assert clf.kkt_violation_ <= 1e-12
        assert np.array_equal(clf.coef_, [1.0])
        f = clf.decision_function([[-1.0], [0.0], [1.0]])
        assert np.array_equal(f, [-1.0, 0.0, 1.0])

    def test_prediction_tie_goes_positive(self):
        clf = KernelSvmClassifier(kernel="linear", c=10.0)
        clf.fit([[-1.0], [1.0]], [-1, 1])
        assert clf.decision_function([[0.0]])[0] == 0.0
        assert clf.predict([[0.0]])[0] == 1

    def test_duplicated_two_point_geometry(self):
        clf = KernelSvmClassifier(kernel="linear", c=10.0)
        clf.fit([[-1.0], [-1.0], [1.0], [1.0]], [-1, -1, 1, 1])
        f = clf.decision_function([[-1.0], [0.0], [1.0]])
        assert f == pytest.approx([-1.0, 0.0, 1.0], abs=1e-6)

    def test_matches_reference_solver_on_xor(self):
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=10.0)
        clf.fit(XOR_X, XOR_Y)
        K = gram_matrix(XOR_X, kernel="rbf", gamma=1.0)
        reference, _ = qp_reference_max(K, XOR_Y, 10.0)
        assert clf.dual_objective() == pytest.approx(reference, abs=1e-5)


class TestXor:
    def test_rbf_separates(self):
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=10.0)
        clf.fit(XOR_X, XOR_Y)
        assert np.array_equal(clf.predict(XOR_X), XOR_Y)

    def test_linear_cannot_separate(self):
        clf = KernelSvmClassifier(kernel="linear", c=10.0, seed=0)
        clf.fit(XOR_X, XOR_Y)
        assert int(np.sum(clf.predict(XOR_X) != XOR_Y)) >= 1


class TestOptimizerInvariants:
    def test_callback_stream_and_feasibility(self):
        X, y = make_blobs(120, 0.3, 2.0, seed=7)
        c = 1.0
        seen = []
        clf = KernelSvmClassifier(kernel="rbf", gamma=0.5, c=c)
        clf.fit(X, y, update_callback=seen.append)
        assert [s["sweep"] for s in seen] == list(range(1, len(seen) + 1))
        for snapshot in seen:
            alpha = snapshot["alpha"]
            assert np.all(alpha >= 0.0)
            assert np.all(alpha <= c)
            assert abs(float(alpha @ y)) <= 1e-8
        objectives = [s["objective"] for s in seen]
        assert list(clf.objective_history_) == objectives
        for earlier, later in zip(objectives, objectives[1:]):
            assert later >= earlier - 1e-9
        updates = [s["n_updates"] for s in seen]
        assert all(b >= a for a, b in zip(updates, updates[1:]))
        assert seen[-1]["violation"] <= clf.tol
        assert clf.n_iter_ == len(seen)

    def test_free_support_vectors_sit_on_margin(self):
        X, y = make_blobs(150, 0.4, 2.5, seed=11)
        clf = KernelSvmClassifier(kernel="rbf", gamma=0.5, c=1.0, tol=1e-4)
        clf.fit(X, y)
        margins = y * clf.decision_function(X)
        alpha = np.zeros(len(y))
        alpha[clf.support_] = np.abs(clf.dual_coef_)
        free = (alpha > 1e-8) & (alpha < 1.0 - 1e-8)
        assert free.any()
        assert np.all(np.abs(margins[free] - 1.0) <= clf.tol + 1e-6)

    def test_reported_violation_matches_recomputation(self):
        X, y = make_blobs(100, 0.3, 2.0, seed=3)
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0)
        clf.fit(X, y)
        assert clf.kkt_violation(X, y) == pytest.approx(clf.kkt_violation_, abs=1e-9)
        assert clf.kkt_violation_ <= clf.tol

    def test_dual_objective_matches_helper(self):
        X, y = make_blobs(80, 0.5, 2.0, seed=5)
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0)
        clf.fit(X, y)
        alpha = np.zeros(len(y))
        alpha[clf.support_] = np.abs(clf.dual_coef_)
        K = gram_matrix(X, kernel="rbf", gamma=1.0)
        assert clf.dual_objective() == pytest.approx(
            dual_objective_value(K, y, alpha), abs=1e-9
        )

    def test_deterministic_per_seed(self):
        X, y = make_blobs(100, 0.3, 1.5, seed=9)
        a = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0, seed=4).fit(X, y)
        b = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0, seed=4).fit(X, y)
        assert np.array_equal(a.dual_coef_, b.dual_coef_)
        assert a.intercept_ == b.intercept_
        assert a.objective_history_ == b.objective_history_


class TestScaleBehavior:
    def test_power_of_two_rescale_is_bit_identical(self):
        # Scaling X by 2 and gamma by 1/4 leaves every kernel value, and so
        # the whole fit, bitwise unchanged.
        X, y = make_blobs(60, 0.4, 2.0, seed=13)
        a = KernelSvmClassifier(kernel="rbf", gamma=0.8, c=1.0, seed=0).fit(X, y)
        b = KernelSvmClassifier(kernel="rbf", gamma=0.2, c=1.0, seed=0).fit(2.0 * X, y)
        assert np.array_equal(a.dual_coef_, b.dual_coef_)
        assert a.intercept_ == b.intercept_
        assert np.array_equal(a.predict(X), b.predict(2.0 * X))

    def test_general_rescale_preserves_predictions(self):
        X, y = make_blobs(60, 0.4, 4.0, seed=14)
        grid = np.random.default_rng(0).normal(0, 2, (50, 2))
        a = KernelSvmClassifier(kernel="rbf", gamma=0.8, c=1.0).fit(X, y)
        b = KernelSvmClassifier(kernel="rbf", gamma=0.8 / 9.0, c=1.0).fit(3.0 * X, y)
        assert np.array_equal(a.predict(grid), b.predict(3.0 * grid))


class TestNonConvergence:
    def test_error_carries_usable_best_iterate(self):
        X, y = overlapping_problem()
        clf = KernelSvmClassifier(
            kernel="rbf", gamma=1.0, c=1.0, tol=1e-12, max_passes=1, max_iter=2
        )
        with pytest.raises(ConvergenceError) as exc:
            clf.fit(X, y)
        err = exc.value
        assert err.code == "converge"
        assert err.model is clf
        assert err.kkt_violation == clf.kkt_violation_
        assert clf.kkt_violation_ > 1e-12
        predictions = err.model.predict(X)
        assert set(np.unique(predictions)) <= {1, -1}

    def test_best_iterate_is_best_seen(self):
        X, y = overlapping_problem()
        seen = []
        clf = KernelSvmClassifier(
            kernel="rbf", gamma=1.0, c=1.0, tol=1e-12, max_passes=1, max_iter=5
        )
        with pytest.raises(ConvergenceError):
            clf.fit(X, y, update_callback=seen.append)
        assert clf.kkt_violation_ == min(s["violation"] for s in seen)


class TestValidationAndErrors:
    def test_single_class_rejected(self):
        with pytest.raises(DegenerateLabelsError):
            KernelSvmClassifier().fit([[0.0], [1.0]], [1, 1])

    def test_bad_parameters_rejected(self):
        X, y = [[0.0], [1.0]], [-1, 1]
        with pytest.raises(ValueError, match="c must be"):
            KernelSvmClassifier(c=0.0).fit(X, y)
        with pytest.raises(ValueError, match="tol must be"):
            KernelSvmClassifier(tol=0.0).fit(X, y)
        with pytest.raises(ValueError, match="max_passes"):
            KernelSvmClassifier(max_passes=0).fit(X, y)
        with pytest.raises(ValueError, match="max_iter"):
            KernelSvmClassifier(max_iter=0).fit(X, y)
        with pytest.raises(ValueError, match="unknown kernel"):
            KernelSvmClassifier(kernel="poly").fit(X, y)
        with pytest.raises(ValueError, match="gamma"):
            KernelSvmClassifier(kernel="rbf", gamma=-1.0).fit(X, y)

    def test_unfitted_predict_raises(self):
        with pytest.raises(NotFittedError):
            KernelSvmClassifier().predict([[0.0]])

    def test_feature_count_checked(self):
        clf = KernelSvmClassifier(kernel="linear", c=1.0).fit([[-1.0], [1.0]], [-1, 1])
        with pytest.raises(ShapeError, match="features"):
            clf.predict([[0.0, 1.0]])

    def test_kkt_violation_rejects_foreign_data(self):
        X, y = make_blobs(40, 0.5, 2.0, seed=2)
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0).fit(X, y)
        with pytest.raises(ValueError, match="support vectors"):
            clf.kkt_violation(X + 1.0, y)
        with pytest.raises(ValueError, match="dual coefficient signs"):
            clf.kkt_violation(X, -y)

    def test_coef_only_for_linear(self):
        X, y = make_blobs(30, 0.5, 2.0, seed=2)
        clf = KernelSvmClassifier(kernel="rbf", gamma=1.0, c=1.0).fit(X, y)
        with pytest.raises(AttributeError):
            clf.coef_

    def test_empty_prediction_input(self):
        clf = KernelSvmClassifier(kernel="linear", c=1.0).fit([[-1.0], [1.0]], [-1, 1])
        assert clf.decision_function(np.empty((0, 1))).shape == (0,)
        assert clf.predict(np.empty((0, 1))).shape == (0,)


class TestModuleHelpers:
    def test_zero_multipliers_baseline(self):
        X, y = make_blobs(20, 0.5, 1.0, seed=0)
        K = gram_matrix(X, kernel="rbf", gamma=1.0)
        alpha = np.zeros(20)
        # every sample violates y f >= 1 by exactly 1 at alpha = 0, b = 0
        assert kkt_violation_value(K, y, alpha, 0.0, 1.0) == 1.0
        assert dual_objective_value(K, y, alpha) == 0.0

    def test_principled_bias_free_vector_mean(self):
        y = np.array([1, -1, 1])
        u = np.array([0.25, -0.75, 2.0])
        alpha = np.array([0.5, 0.5, 0.0])  # first two free, third at zero
        assert principled_bias(y, u, alpha, 1.0) == pytest.approx(
            ((1 - 0.25) + (-1 + 0.75)) / 2
        )

    def test_principled_bias_interval_midpoint(self):
        # all multipliers bound: lower edge from the zero-positive sample,
        # upper edge from the zero-negative one.
        y = np.array([1, -1])
        u = np.array([0.4, 0.2])
        alpha = np.array([0.0, 0.0])
        lower = 1.0 - 0.4
        upper = -1.0 - 0.2
        assert principled_bias(y, u, alpha, 1.0) == (lower + upper) / 2
