"""Kernel functions and Gram-matrix construction for the dual SVM.

Two kernels are supported: ``linear`` (plain dot product) and ``rbf``,
``K(a, b) = exp(-gamma * ||a - b||^2)``. RBF values are always in (0, 1]
and exactly 1 when ``a == b``.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from ._validation import as_float_matrix, as_float_vector
from .errors import EmptyInputError, ShapeError

VALID_KERNELS = ("linear", "rbf")


def check_kernel_params(kernel: str, gamma) -> None:
    """Validate a kernel kind and its gamma (required positive for rbf)."""
    if kernel not in VALID_KERNELS:
        raise ValueError(f"unknown kernel {kernel!r}, expected one of {VALID_KERNELS}")
    if kernel == "rbf":
        if gamma is None:
            raise ValueError("rbf kernel requires gamma")
        if not np.isfinite(gamma) or gamma <= 0:
            raise ValueError(f"gamma must be finite and > 0, got {gamma}")


def squared_distance(a, b) -> float:
    """Squared Euclidean distance sum((a_i - b_i)^2) between two vectors."""
    a = as_float_vector(a, "a")
    b = as_float_vector(b, "b")
    if a.shape != b.shape:
        raise ShapeError(f"vector lengths differ: {a.size} vs {b.size}")
    d = a - b
    return float(np.dot(d, d))


def kernel_value(a, b, kernel: str = "rbf", gamma: float | None = None) -> float:
    """Evaluate the kernel on a single pair of vectors."""
    check_kernel_params(kernel, gamma)
    if kernel == "linear":
        a = as_float_vector(a, "a")
        b = as_float_vector(b, "b")
        if a.shape != b.shape:
            raise ShapeError(f"vector lengths differ: {a.size} vs {b.size}")
        return float(np.dot(a, b))
    return float(np.exp(-gamma * squared_distance(a, b)))


def gram_matrix(X, kernel: str = "rbf", gamma: float | None = None) -> np.ndarray:
    """Pairwise kernel matrix G[i, j] = K(x_i, x_j).

    Each pair is computed once and mirrored, so the result is symmetric
    bit-for-bit; the rbf diagonal is exactly 1.
    """
    check_kernel_params(kernel, gamma)
    X = as_float_matrix(X)
    if X.shape[0] == 0:
        raise EmptyInputError("gram_matrix needs at least one sample")
    if kernel == "linear":
        G = X @ X.T
        lower = np.tril(G)
        return lower + np.tril(G, -1).T
    if X.shape[0] == 1:
        return np.ones((1, 1))
    D = squareform(pdist(X, "sqeuclidean"))
    return np.exp(-gamma * D)


def cross_kernel(A, B, kernel: str = "rbf", gamma: float | None = None) -> np.ndarray:
    """Kernel matrix between the rows of A and the rows of B."""
    check_kernel_params(kernel, gamma)
    A = as_float_matrix(A, "A")
    B = as_float_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise ShapeError(f"feature counts differ: {A.shape[1]} vs {B.shape[1]}")
    if kernel == "linear":
        return A @ B.T
    return np.exp(-gamma * cdist(A, B, "sqeuclidean"))


def default_gamma(X) -> float:
    """Fallback kernel width: 1 / (n_features * mean per-feature variance).

    Constant features contribute zero variance; if every feature is constant
    the heuristic degrades to 1 / n_features.
    """
    X = as_float_matrix(X)
    d = X.shape[1]
    if d == 0 or X.shape[0] == 0:
        return 1.0
    var = X.var(axis=0)
    var[np.ptp(X, axis=0) == 0] = 0.0
    mean_var = float(var.mean())
    if mean_var > 0:
        return 1.0 / (d * mean_var)
    return 1.0 / d
