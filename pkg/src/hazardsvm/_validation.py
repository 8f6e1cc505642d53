"""Input validation helpers used by the estimators and metric functions."""

from __future__ import annotations

import numpy as np

from .errors import LabelError, ShapeError

VALID_LABELS = (1, -1)


def as_float_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce to a 2-D float64 array with all entries finite."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1) if X.size else X.reshape(0, 0)
    if X.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={X.ndim}")
    if X.size and not np.isfinite(X).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return X


def as_float_vector(x, name: str = "x") -> np.ndarray:
    """Coerce to a 1-D float64 array with all entries finite."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got ndim={x.ndim}")
    if x.size and not np.isfinite(x).all():
        raise ValueError(f"{name} contains NaN or infinite values")
    return x


def as_label_vector(y, name: str = "y") -> np.ndarray:
    """Coerce to a 1-D integer array of +1/-1 labels."""
    y = np.asarray(y)
    if y.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got ndim={y.ndim}")
    y = y.astype(np.int64, casting="unsafe")
    bad = ~np.isin(y, VALID_LABELS)
    if bad.any():
        raise LabelError(
            f"{name} must contain only +1/-1, found {np.unique(y[bad]).tolist()}"
        )
    return y


def check_same_length(a, b, what: str = "arrays") -> None:
    if len(a) != len(b):
        raise ShapeError(f"{what} have different lengths: {len(a)} vs {len(b)}")


def check_feature_count(X: np.ndarray, expected: int, name: str = "X") -> None:
    if X.shape[1] != expected:
        raise ShapeError(
            f"{name} has {X.shape[1]} features, expected {expected}"
        )


def check_fitted(estimator, attribute: str) -> None:
    from sklearn.exceptions import NotFittedError

    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit() first"
        )
