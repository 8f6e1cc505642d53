"""End-to-end training pipeline behind a single estimator.

``HazardClassifier.fit`` chains z-score normalization, correlation feature
selection, optional SMOTE rebalancing of the (already transformed) training
data, and SMO training. Prediction applies the stored transforms before the
kernel expansion, so callers always work in raw feature space.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import (
    as_float_matrix,
    as_label_vector,
    check_feature_count,
    check_fitted,
    check_same_length,
)
from .errors import ConvergenceError, EmptyInputError
from .oversample import SmoteOversampler
from .preprocessing import CorrelationFeatureSelector, StandardNormalizer
from .svm import KernelSvmClassifier


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed for sub-component ``index`` of a seeded run."""
    sequence = np.random.SeedSequence([int(seed), int(index)])
    return int(sequence.generate_state(1)[0])


class HazardClassifier(BaseEstimator):
    """Raw-feature hazard classifier: normalize, select, balance, train.

    Parameters mirror the individual stages: ``min_abs_r`` is the
    correlation-selection threshold, ``smote``/``k_neighbors``/``target_ratio``
    configure the optional oversampling of the training data, and the rest
    are passed to the SVM. ``seed`` drives both the oversampler and the
    solver through derived, independent streams.
    """

    def __init__(
        self,
        kernel: str = "rbf",
        gamma: float | None = None,
        c: float = 1.0,
        min_abs_r: float = 0.1,
        smote: bool = False,
        k_neighbors: int = 5,
        target_ratio: float = 1.0,
        tol: float = 1e-3,
        max_passes: int = 10,
        max_iter: int = 10_000,
        seed: int = 0,
    ):
        self.kernel = kernel
        self.gamma = gamma
        self.c = c
        self.min_abs_r = min_abs_r
        self.smote = smote
        self.k_neighbors = k_neighbors
        self.target_ratio = target_ratio
        self.tol = tol
        self.max_passes = max_passes
        self.max_iter = max_iter
        self.seed = seed

    def fit(self, X, y, feature_names=None, update_callback=None) -> "HazardClassifier":
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_same_length(X, y, "X and y")
        if feature_names is None:
            feature_names = tuple(f"x{i}" for i in range(X.shape[1]))
        else:
            feature_names = tuple(str(n) for n in feature_names)
            if len(feature_names) != X.shape[1]:
                raise ValueError(
                    f"{len(feature_names)} feature names for {X.shape[1]} columns"
                )

        normalizer = StandardNormalizer().fit(X)
        Xn = normalizer.transform(X)
        selector = CorrelationFeatureSelector(min_abs_r=self.min_abs_r).fit(Xn, y)
        if selector.kept_indices_.size == 0:
            raise EmptyInputError(
                f"correlation selection dropped every feature at "
                f"min_abs_r={self.min_abs_r}; lower the threshold"
            )
        Xs = selector.transform(Xn)

        if self.smote:
            sampler = SmoteOversampler(
                k_neighbors=self.k_neighbors,
                target_ratio=self.target_ratio,
                seed=derive_seed(self.seed, 0),
            )
            Xt, yt = sampler.fit_resample(Xs, y)
        else:
            Xt, yt = Xs, y

        pos = int(np.sum(y == 1))
        self.feature_names_ = feature_names
        self.n_features_in_ = X.shape[1]
        self.normalizer_ = normalizer
        self.selector_ = selector
        self.n_train_samples_ = X.shape[0]
        self.n_positive_ = pos
        self.n_negative_ = int(y.size - pos)
        self.n_synthetic_ = int(yt.size - y.size)
        self.svm_ = KernelSvmClassifier(
            kernel=self.kernel,
            gamma=self.gamma,
            c=self.c,
            tol=self.tol,
            max_passes=self.max_passes,
            max_iter=self.max_iter,
            seed=derive_seed(self.seed, 1),
        )
        try:
            self.svm_.fit(Xt, yt, update_callback=update_callback)
        except ConvergenceError as err:
            # The inner solver already adopted its best iterate, so this
            # pipeline is usable as-is; surface it instead of the bare SVM.
            err.model = self
            raise
        return self

    def _transform(self, X) -> np.ndarray:
        return self.selector_.transform(self.normalizer_.transform(X))

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "svm_")
        X = as_float_matrix(X)
        check_feature_count(X, self.n_features_in_)
        return self.svm_.decision_function(self._transform(X))

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1).astype(np.int64)
