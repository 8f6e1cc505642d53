"""Feature scaling and correlation-based feature selection transformers."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import (
    as_float_matrix,
    as_label_vector,
    check_feature_count,
    check_fitted,
    check_same_length,
)
from .errors import DegenerateLabelsError, EmptyInputError


class StandardNormalizer(BaseEstimator, TransformerMixin):
    """Z-score scaler using the population standard deviation (divisor n).

    Constant features (max == min, detected exactly rather than through a
    floating-point variance estimate) get ``std_ == 0`` and transform to 0:
    they carry no information and would otherwise divide by zero.

    Attributes
    ----------
    mean_ : ndarray of shape (n_features,)
    std_ : ndarray of shape (n_features,)
    """

    def fit(self, X, y=None):
        X = as_float_matrix(X)
        if X.shape[0] == 0:
            raise EmptyInputError("cannot fit normalizer on an empty dataset")
        self.n_features_in_ = X.shape[1]
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)
        std[np.ptp(X, axis=0) == 0] = 0.0
        self.std_ = std
        return self

    def transform(self, X):
        check_fitted(self, "mean_")
        X = as_float_matrix(X)
        check_feature_count(X, self.n_features_in_)
        zero = self.std_ == 0
        safe = np.where(zero, 1.0, self.std_)
        Z = (X - self.mean_) / safe
        Z[:, zero] = 0.0
        return Z


class CorrelationFeatureSelector(BaseEstimator, TransformerMixin):
    """Keeps features whose Pearson correlation with the +-1 label is strong.

    A feature is kept when ``|r| >= min_abs_r``. Constant features have an
    undefined correlation (zero variance); they are recorded as ``None`` and
    always dropped.

    Attributes
    ----------
    correlations_ : list of float or None, one entry per input feature
    kept_indices_ : ndarray of kept column indices, strictly increasing
    """

    def __init__(self, min_abs_r: float = 0.1):
        self.min_abs_r = min_abs_r

    def fit(self, X, y):
        if not (0.0 <= self.min_abs_r <= 1.0):
            raise ValueError(f"min_abs_r must be in [0, 1], got {self.min_abs_r}")
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_same_length(X, y, "X and y")
        if X.shape[0] == 0:
            raise EmptyInputError("cannot select features on an empty dataset")
        if np.unique(y).size < 2:
            raise DegenerateLabelsError(
                "correlation against the label is undefined with a single class"
            )
        yf = y.astype(np.float64)
        yc = yf - yf.mean()
        sy = np.sqrt(np.mean(yc * yc))
        n = X.shape[0]
        correlations: list[float | None] = []
        kept = []
        for j in range(X.shape[1]):
            col = X[:, j]
            if np.ptp(col) == 0:
                correlations.append(None)
                continue
            xc = col - col.mean()
            sx = np.sqrt(np.mean(xc * xc))
            r = float(np.dot(xc, yc) / (n * sx * sy))
            # A perfectly (anti)correlated feature can come out an ulp short
            # of +-1; snap so it survives even min_abs_r = 1.
            if abs(r) >= 1.0 - 1e-12:
                r = 1.0 if r > 0 else -1.0
            correlations.append(r)
            if abs(r) >= self.min_abs_r:
                kept.append(j)
        self.n_features_in_ = X.shape[1]
        self.correlations_ = correlations
        self.kept_indices_ = np.asarray(kept, dtype=np.intp)
        return self

    def transform(self, X):
        check_fitted(self, "kept_indices_")
        X = as_float_matrix(X)
        check_feature_count(X, self.n_features_in_)
        return X[:, self.kept_indices_]
