"""The end-to-end estimator: normalize, select, balance, train, predict."""

import numpy as np
import pytest
from sklearn.exceptions import NotFittedError

from hazardsvm import (
    ConvergenceError,
    EmptyInputError,
    HazardClassifier,
    ShapeError,
    derive_seed,
)

from conftest import make_blobs


class TestDeriveSeed:
    def test_deterministic(self):
        assert derive_seed(42, 0) == derive_seed(42, 0)

    def test_children_are_distinct(self):
        children = {derive_seed(42, i) for i in range(10)}
        assert len(children) == 10

    def test_parents_are_independent(self):
        assert derive_seed(42, 0) != derive_seed(43, 0)


class TestFitPredict:
    def test_separable_blobs(self):
        X, y = make_blobs(200, 0.3, 4.0, seed=0)
        clf = HazardClassifier(gamma=1.0, c=10.0, min_abs_r=0.0).fit(X, y)
        assert np.array_equal(clf.predict(X), y)

    def test_fitted_attributes(self):
        X, y = make_blobs(100, 0.2, 3.0, seed=1)
        clf = HazardClassifier(gamma=1.0, c=1.0, min_abs_r=0.0, smote=True).fit(X, y)
        assert clf.feature_names_ == ("x0", "x1")
        assert clf.n_features_in_ == 2
        assert clf.n_train_samples_ == 100
        assert clf.n_positive_ == 20
        assert clf.n_negative_ == 80
        assert clf.n_synthetic_ == 60  # oversampled up to 80/80
        assert clf.normalizer_.mean_.shape == (2,)
        assert clf.selector_.kept_indices_.tolist() == [0, 1]
        assert clf.svm_.n_features_in_ == 2

    def test_synthetic_count_zero_without_smote(self):
        X, y = make_blobs(100, 0.2, 3.0, seed=1)
        clf = HazardClassifier(gamma=1.0, c=1.0, min_abs_r=0.0).fit(X, y)
        assert clf.n_synthetic_ == 0

    def test_custom_feature_names(self):
        X, y = make_blobs(60, 0.5, 3.0, seed=2)
        clf = HazardClassifier(gamma=1.0, min_abs_r=0.0)
        clf.fit(X, y, feature_names=("wind", "pressure"))
        assert clf.feature_names_ == ("wind", "pressure")

    def test_wrong_name_count_rejected(self):
        X, y = make_blobs(60, 0.5, 3.0, seed=2)
        with pytest.raises(ValueError, match="feature names for 2 columns"):
            HazardClassifier().fit(X, y, feature_names=("only_one",))

    def test_normalizer_fitted_on_raw_training_data(self):
        # Normalization statistics come from the input as given, before any
        # synthetic samples exist.
        X, y = make_blobs(100, 0.2, 3.0, seed=3)
        clf = HazardClassifier(gamma=1.0, min_abs_r=0.0, smote=True).fit(X, y)
        assert np.array_equal(clf.normalizer_.mean_, X.mean(axis=0))

    def test_transform_equivalence(self):
        # The pipeline's decision values equal the inner SVM's on manually
        # transformed inputs, bit for bit.
        X, y = make_blobs(80, 0.4, 2.0, seed=4)
        clf = HazardClassifier(gamma=0.5, c=1.0, min_abs_r=0.0).fit(X, y)
        manual = clf.selector_.transform(clf.normalizer_.transform(X))
        assert np.array_equal(
            clf.decision_function(X), clf.svm_.decision_function(manual)
        )

    def test_update_callback_forwarded(self):
        X, y = make_blobs(60, 0.5, 3.0, seed=5)
        sweeps = []
        HazardClassifier(gamma=1.0, min_abs_r=0.0).fit(
            X, y, update_callback=lambda s: sweeps.append(s["sweep"])
        )
        assert sweeps == list(range(1, len(sweeps) + 1))


class TestFeatureHandling:
    def test_constant_feature_dropped(self):
        X, y = make_blobs(80, 0.5, 3.0, seed=6)
        X3 = np.hstack([X, np.full((80, 1), 9.0)])
        clf = HazardClassifier(gamma=1.0, min_abs_r=0.0).fit(X3, y)
        assert clf.selector_.kept_indices_.tolist() == [0, 1]
        assert clf.selector_.correlations_[2] is None
        assert clf.predict(X3).shape == (80,)

    def test_uninformative_feature_dropped_by_threshold(self):
        rng = np.random.default_rng(7)
        X, y = make_blobs(200, 0.5, 3.0, seed=7)
        X3 = np.hstack([X, rng.normal(size=(200, 1))])
        clf = HazardClassifier(gamma=1.0, min_abs_r=0.3).fit(X3, y)
        assert 2 not in clf.selector_.kept_indices_.tolist()

    def test_all_features_dropped_raises(self):
        rng = np.random.default_rng(8)
        X = rng.normal(size=(50, 3))
        y = np.where(rng.random(50) < 0.5, 1, -1)
        y[:2] = [1, -1]
        with pytest.raises(EmptyInputError, match="dropped every feature"):
            HazardClassifier(min_abs_r=0.999).fit(X, y)

    def test_prediction_feature_count_checked(self):
        X, y = make_blobs(40, 0.5, 3.0, seed=9)
        clf = HazardClassifier(gamma=1.0, min_abs_r=0.0).fit(X, y)
        with pytest.raises(ShapeError, match="features"):
            clf.predict(X[:, :1])


class TestDeterminism:
    def test_same_seed_reproduces_bitwise(self):
        X, y = make_blobs(120, 0.25, 2.0, seed=10)
        a = HazardClassifier(gamma=1.0, c=1.0, smote=True, min_abs_r=0.0, seed=3).fit(X, y)
        b = HazardClassifier(gamma=1.0, c=1.0, smote=True, min_abs_r=0.0, seed=3).fit(X, y)
        assert np.array_equal(a.svm_.dual_coef_, b.svm_.dual_coef_)
        assert np.array_equal(a.svm_.support_vectors_, b.svm_.support_vectors_)
        assert a.svm_.intercept_ == b.svm_.intercept_
        grid = np.random.default_rng(0).normal(0, 2, (50, 2))
        assert np.array_equal(a.decision_function(grid), b.decision_function(grid))

    def test_different_seeds_differ(self):
        X, y = make_blobs(120, 0.25, 2.0, seed=10)
        a = HazardClassifier(gamma=1.0, c=1.0, smote=True, min_abs_r=0.0, seed=3).fit(X, y)
        b = HazardClassifier(gamma=1.0, c=1.0, smote=True, min_abs_r=0.0, seed=4).fit(X, y)
        assert not np.array_equal(a.svm_.support_vectors_, b.svm_.support_vectors_)


class TestNonConvergence:
    def test_error_carries_the_pipeline(self):
        X, y = make_blobs(40, 0.5, 0.1, seed=1)
        clf = HazardClassifier(
            gamma=1.0, c=1.0, tol=1e-12, max_passes=1, max_iter=2, min_abs_r=0.0
        )
        with pytest.raises(ConvergenceError) as exc:
            clf.fit(X, y)
        err = exc.value
        assert err.model is clf
        assert err.kkt_violation > 0
        # best-so-far iterate is adopted, so the pipeline still predicts
        predictions = err.model.predict(X)
        assert predictions.shape == (40,)


class TestUnfitted:
    def test_predict_before_fit(self):
        with pytest.raises(NotFittedError):
            HazardClassifier().predict([[0.0, 1.0]])

    def test_get_params_round_trip(self):
        clf = HazardClassifier(c=2.5, smote=True, seed=9)
        params = clf.get_params()
        assert params["c"] == 2.5
        assert params["smote"] is True
        assert HazardClassifier(**params).get_params() == params
