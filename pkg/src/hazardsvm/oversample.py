"""SMOTE: synthetic minority oversampling by interpolation between
minority-class nearest neighbors."""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator

from ._validation import as_float_matrix, as_label_vector, check_same_length
from .errors import DegenerateLabelsError, InsufficientMinorityError


def minority_label(y: np.ndarray) -> int:
    """The label with fewer samples; +1 wins ties (hazards are the rare class)."""
    pos = int(np.sum(y == 1))
    neg = int(np.sum(y == -1))
    return 1 if pos <= neg else -1


def minority_neighbors(X, y, index: int, k: int) -> np.ndarray:
    """Indices of the k nearest other minority samples to sample ``index``.

    Distance is Euclidean; equal distances are broken by lower index. Returns
    all other minority samples when fewer than k exist; never includes
    ``index`` itself.
    """
    X = as_float_matrix(X)
    y = as_label_vector(y)
    check_same_length(X, y, "X and y")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    minority = minority_label(y)
    if y[index] != minority:
        raise ValueError(f"sample {index} is not in the minority class")
    others = np.flatnonzero(y == minority)
    others = others[others != index]
    if others.size == 0:
        raise InsufficientMinorityError(
            "minority class has a single sample; no neighbors exist"
        )
    diffs = X[others] - X[index]
    d2 = np.einsum("ij,ij->i", diffs, diffs)
    order = np.lexsort((others, d2))
    return others[order[: min(k, others.size)]]


class SmoteOversampler(BaseEstimator):
    """Balances a binary dataset by appending synthetic minority samples.

    Each synthetic point is ``x + lam * (n - x)`` where ``x`` is a uniformly
    chosen minority sample (with replacement), ``n`` one of its
    ``k_neighbors`` nearest minority neighbors, and ``lam ~ Uniform[0, 1)``.
    Exactly ``max(0, ceil(target_ratio * majority) - minority)`` samples are
    appended; the originals are preserved verbatim and come first. Output is
    deterministic for a fixed seed.
    """

    def __init__(self, k_neighbors: int = 5, target_ratio: float = 1.0, seed: int = 0):
        self.k_neighbors = k_neighbors
        self.target_ratio = target_ratio
        self.seed = seed

    def fit_resample(self, X, y):
        if self.k_neighbors < 1:
            raise ValueError(f"k_neighbors must be >= 1, got {self.k_neighbors}")
        if not (0.0 < self.target_ratio <= 1.0):
            raise ValueError(
                f"target_ratio must be in (0, 1], got {self.target_ratio}"
            )
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_same_length(X, y, "X and y")
        if np.unique(y).size < 2:
            raise DegenerateLabelsError("oversampling needs both classes present")
        minority = minority_label(y)
        min_idx = np.flatnonzero(y == minority)
        majority_count = y.size - min_idx.size
        if min_idx.size < 2:
            raise InsufficientMinorityError(
                "minority class needs at least 2 samples to interpolate between"
            )
        needed = max(0, math.ceil(self.target_ratio * majority_count) - min_idx.size)
        if needed == 0:
            return X.copy(), y.copy()

        neighbor_sets = [
            minority_neighbors(X, y, int(i), self.k_neighbors) for i in min_idx
        ]
        rng = np.random.default_rng(self.seed)
        synthetic = np.empty((needed, X.shape[1]))
        for t in range(needed):
            base_pos = int(rng.integers(min_idx.size))
            neighbors = neighbor_sets[base_pos]
            partner = int(neighbors[rng.integers(neighbors.size)])
            lam = rng.random()
            base = X[min_idx[base_pos]]
            synthetic[t] = base + lam * (X[partner] - base)

        X_out = np.vstack([X, synthetic])
        y_out = np.concatenate([y, np.full(needed, minority, dtype=y.dtype)])
        return X_out, y_out
