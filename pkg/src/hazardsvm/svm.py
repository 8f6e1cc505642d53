"""Soft-margin kernel SVM trained by sequential minimal optimization.

The solver maximizes the dual

    sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)

subject to 0 <= a_i <= C and sum_i a_i y_i = 0. It sweeps over KKT
violators, pairing each with the index of largest error gap (seeded-random
rotation as fallback) and solving the two-variable subproblem exactly.

The bias never enters the pair update (only error differences do), so it is
recomputed once per sweep: the mean of ``y - u`` over free support vectors
when any exist, otherwise the midpoint of the interval the bound samples
leave feasible. Convergence means the maximum KKT violation under that bias
is at most ``tol``.
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
from .errors import ConvergenceError, DegenerateLabelsError
from .kernels import check_kernel_params, cross_kernel, default_gamma, gram_matrix

# Above this the dense Gram matrix would pass half a gigabyte; fall back to
# recomputing rows on demand.
DENSE_GRAM_MAX_SAMPLES = 8192

# Relative progress floor for a pair update, and the snap width used to pull
# nearly-bound multipliers onto their exact bound so the free/bound split
# stays a clean comparison.
_PROGRESS_EPS = 1e-12
_UPDATES_PER_REBUILD = 1000


class _KernelRows:
    """Row access to the training Gram matrix, dense while memory allows."""

    def __init__(self, X, kernel, gamma):
        self.X = X
        self.kernel = kernel
        self.gamma = gamma
        self.n = X.shape[0]
        if self.n <= DENSE_GRAM_MAX_SAMPLES:
            self._dense = gram_matrix(X, kernel=kernel, gamma=gamma)
            self.diag = self._dense.diagonal()
        else:
            self._dense = None
            if kernel == "rbf":
                self.diag = np.ones(self.n)
            else:
                self.diag = np.einsum("ij,ij->i", X, X)

    def row(self, i: int) -> np.ndarray:
        if self._dense is not None:
            return self._dense[i]
        return cross_kernel(
            self.X[i : i + 1], self.X, kernel=self.kernel, gamma=self.gamma
        )[0]

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """K @ v, touching only rows where v is nonzero."""
        if self._dense is not None:
            return self._dense @ v
        out = np.zeros(self.n)
        for j in np.flatnonzero(v):
            out += v[j] * self.row(j)
        return out


def principled_bias(y, u, alpha, c) -> float:
    """Bias consistent with the current multipliers.

    Free support vectors pin it exactly (mean of ``y - u`` over them). With
    none, every bound sample contributes a one-sided inequality; the midpoint
    of the resulting interval is used.
    """
    free = (alpha > 0) & (alpha < c)
    if free.any():
        return float(np.mean(y[free] - u[free]))
    at_zero = alpha <= 0
    at_c = alpha >= c
    lower = np.concatenate(
        [1.0 - u[at_zero & (y == 1)], -1.0 - u[at_c & (y == -1)]]
    )
    upper = np.concatenate(
        [-1.0 - u[at_zero & (y == -1)], 1.0 - u[at_c & (y == 1)]]
    )
    if lower.size and upper.size:
        return float((lower.max() + upper.min()) / 2.0)
    if lower.size:
        return float(lower.max())
    if upper.size:
        return float(upper.min())
    return 0.0


def kkt_violation_value(K, y, alpha, bias, c) -> float:
    """Largest KKT violation of the dual variables at the given bias.

    Per sample: ``max(0, 1 - y f)`` at ``alpha == 0``, ``|y f - 1|`` when
    free, ``max(0, y f - 1)`` at ``alpha == C``.
    """
    K = np.asarray(K, dtype=np.float64)
    y = as_label_vector(y)
    alpha = np.asarray(alpha, dtype=np.float64)
    u = K @ (alpha * y)
    return _violation_from_margins(y * (u + bias) - 1.0, alpha, c)


def _violation_from_margins(r, alpha, c) -> float:
    viol = np.abs(r)
    np.minimum(viol, np.maximum(0.0, -r), out=viol, where=alpha <= 0)
    np.minimum(viol, np.maximum(0.0, r), out=viol, where=alpha >= c)
    return float(viol.max()) if viol.size else 0.0


def dual_objective_value(K, y, alpha) -> float:
    """Value of the dual objective for given multipliers and Gram matrix."""
    K = np.asarray(K, dtype=np.float64)
    y = as_label_vector(y)
    alpha = np.asarray(alpha, dtype=np.float64)
    coef = alpha * y
    return float(alpha.sum() - 0.5 * coef @ (K @ coef))


class _SmoState:
    """One training run: multipliers, the cached margin vector, and progress."""

    def __init__(self, rows: _KernelRows, y, c, tol, rng):
        self.rows = rows
        self.y = y
        self.c = float(c)
        self.tol = float(tol)
        self.rng = rng
        n = rows.n
        self.alpha = np.zeros(n)
        # u[i] = sum_j alpha_j y_j K(x_i, x_j), updated incrementally and
        # rebuilt periodically so drift cannot accumulate.
        self.u = np.zeros(n)
        self.bias = 0.0
        self.updates = 0
        self.snap = _PROGRESS_EPS * max(1.0, self.c)

    def objective(self) -> float:
        return float(self.alpha.sum() - 0.5 * (self.alpha * self.y) @ self.u)

    def violation(self) -> float:
        r = self.y * (self.u + self.bias) - 1.0
        return _violation_from_margins(r, self.alpha, self.c)

    def refresh_bias(self) -> None:
        self.bias = principled_bias(self.y, self.u, self.alpha, self.c)

    def rebuild_u(self) -> None:
        self.u = self.rows.matvec(self.alpha * self.y)

    def take_step(self, i: int, j: int) -> bool:
        if i == j:
            return False
        alpha, y, c = self.alpha, self.y, self.c
        ai, aj = alpha[i], alpha[j]
        yi, yj = y[i], y[j]
        if yi == yj:
            total = ai + aj
            lo, hi = max(0.0, total - c), min(c, total)
        else:
            diff = aj - ai
            lo, hi = max(0.0, diff), min(c, c + diff)
        if lo >= hi:
            return False
        ki = self.rows.row(i)
        kj = self.rows.row(j)
        eta = ki[i] + kj[j] - 2.0 * ki[j]
        if eta <= 0.0:
            # The pair direction has no curvature; a PSD kernel only produces
            # this for coincident points, where no progress is possible.
            return False
        # The bias cancels in the error difference, so u alone suffices.
        delta_e = (self.u[i] - yi) - (self.u[j] - yj)
        aj_new = aj + yj * delta_e / eta
        if aj_new < lo:
            aj_new = lo
        elif aj_new > hi:
            aj_new = hi
        if aj_new < self.snap and lo == 0.0:
            aj_new = 0.0
        elif c - aj_new < self.snap and hi == c:
            aj_new = c
        if abs(aj_new - aj) < _PROGRESS_EPS * (aj_new + aj + _PROGRESS_EPS):
            return False
        ai_new = ai + yi * yj * (aj - aj_new)
        if ai_new < self.snap:
            ai_new = 0.0
        elif c - ai_new < self.snap:
            ai_new = c
        self.u += yi * (ai_new - ai) * ki + yj * (aj_new - aj) * kj
        alpha[i] = ai_new
        alpha[j] = aj_new
        self.updates += 1
        if self.updates % _UPDATES_PER_REBUILD == 0:
            self.rebuild_u()
        return True

    def _rotated(self, indices: np.ndarray) -> np.ndarray:
        if indices.size < 2:
            return indices
        start = int(self.rng.integers(indices.size))
        return np.roll(indices, -start)

    def examine(self, i: int) -> bool:
        alpha, y = self.alpha, self.y
        r = y[i] * (self.u[i] + self.bias) - 1.0
        if not ((r < -self.tol and alpha[i] < self.c) or (r > self.tol and alpha[i] > 0)):
            return False
        nonbound = np.flatnonzero((alpha > 0) & (alpha < self.c))
        if nonbound.size > 1:
            errors = self.u[nonbound] - y[nonbound]
            e_i = self.u[i] - y[i]
            j = int(nonbound[np.argmax(np.abs(e_i - errors))])
            if self.take_step(i, j):
                return True
        for j in self._rotated(nonbound):
            if self.take_step(i, int(j)):
                return True
        for j in self._rotated(np.arange(self.rows.n)):
            if self.take_step(i, int(j)):
                return True
        return False


def _smo_solve(rows, y, c, tol, max_passes, max_iter, rng, update_callback=None):
    """Run SMO sweeps until the KKT tolerance is met or budgets run out.

    Returns ``(state, history, n_sweeps, converged, best)`` where ``best``
    is the ``(violation, alpha, bias)`` of the best iterate seen.
    """
    state = _SmoState(rows, y, c, tol, rng)
    history: list[float] = []
    best = (np.inf, state.alpha.copy(), state.bias)
    examine_all = True
    stalled = 0
    sweeps = 0
    converged = False
    while sweeps < max_iter:
        sweeps += 1
        if examine_all:
            targets = np.arange(rows.n)
        else:
            targets = np.flatnonzero((state.alpha > 0) & (state.alpha < c))
        changed = 0
        for i in targets:
            if state.examine(int(i)):
                changed += 1
        state.refresh_bias()
        violation = state.violation()
        history.append(state.objective())
        if violation < best[0]:
            best = (violation, state.alpha.copy(), state.bias)
        if update_callback is not None:
            update_callback(
                {
                    "sweep": sweeps,
                    "alpha": state.alpha.copy(),
                    "bias": state.bias,
                    "violation": violation,
                    "objective": history[-1],
                    "n_updates": state.updates,
                }
            )
        if violation <= tol:
            converged = True
            break
        if changed == 0:
            stalled += 1
            if stalled >= max_passes:
                break
        else:
            stalled = 0
        if examine_all:
            examine_all = False
        elif changed == 0:
            examine_all = True
    return state, history, sweeps, converged, best


class KernelSvmClassifier(BaseEstimator):
    """Binary +-1 classifier trained by SMO on a linear or RBF kernel.

    Parameters
    ----------
    kernel : "rbf" or "linear".
    gamma : RBF width; ``None`` selects 1 / (n_features * mean feature
        variance) at fit time. Ignored for the linear kernel.
    c : box constraint on the dual variables (soft-margin penalty).
    tol : KKT tolerance that defines convergence.
    max_passes : consecutive sweeps without any multiplier update before
        training gives up.
    max_iter : hard cap on sweeps.
    seed : seeds the random pair-selection fallback.
    """

    def __init__(
        self,
        kernel: str = "rbf",
        gamma: float | None = None,
        c: float = 1.0,
        tol: float = 1e-3,
        max_passes: int = 10,
        max_iter: int = 10_000,
        seed: int = 0,
    ):
        self.kernel = kernel
        self.gamma = gamma
        self.c = c
        self.tol = tol
        self.max_passes = max_passes
        self.max_iter = max_iter
        self.seed = seed

    def _check_params(self):
        if not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be a positive finite number, got {self.c}")
        if not (np.isfinite(self.tol) and self.tol > 0):
            raise ValueError(f"tol must be a positive finite number, got {self.tol}")
        if self.max_passes < 1:
            raise ValueError(f"max_passes must be >= 1, got {self.max_passes}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")

    def fit(self, X, y, update_callback=None) -> "KernelSvmClassifier":
        self._check_params()
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_same_length(X, y, "X and y")
        if np.unique(y).size < 2:
            raise DegenerateLabelsError(
                "training requires both classes, got a single label value"
            )
        if self.kernel == "rbf" and self.gamma is None:
            gamma = default_gamma(X)
        else:
            gamma = self.gamma
        check_kernel_params(self.kernel, gamma)

        rows = _KernelRows(X, self.kernel, gamma)
        rng = np.random.default_rng(self.seed)
        state, history, sweeps, converged, best = _smo_solve(
            rows, y, self.c, self.tol, self.max_passes, self.max_iter, rng,
            update_callback,
        )
        if converged:
            alpha, bias, violation = state.alpha, state.bias, state.violation()
        else:
            violation, alpha, bias = best
        self._adopt(X, y, gamma, alpha, bias, violation, history, sweeps)
        if not converged:
            err = ConvergenceError(
                f"SMO stopped after {sweeps} sweeps with KKT violation "
                f"{violation:.3e} > tol {self.tol:g}"
            )
            err.model = self
            err.kkt_violation = violation
            raise err
        return self

    def _adopt(self, X, y, gamma, alpha, bias, violation, history, sweeps):
        support = np.flatnonzero(alpha > 0)
        self.support_ = support
        self.support_vectors_ = X[support].copy()
        self.dual_coef_ = (alpha * y)[support]
        self.intercept_ = float(bias)
        self.gamma_ = None if self.kernel == "linear" else float(gamma)
        self.n_features_in_ = X.shape[1]
        self.kkt_violation_ = float(violation)
        self.objective_history_ = tuple(history)
        self.n_iter_ = sweeps

    def decision_function(self, X) -> np.ndarray:
        check_fitted(self, "dual_coef_")
        X = as_float_matrix(X)
        check_feature_count(X, self.n_features_in_)
        if self.support_vectors_.shape[0] == 0:
            return np.full(X.shape[0], self.intercept_)
        if X.shape[0] == 0:
            return np.empty(0)
        K = cross_kernel(X, self.support_vectors_, kernel=self.kernel, gamma=self.gamma_)
        return K @ self.dual_coef_ + self.intercept_

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1, -1).astype(np.int64)

    def dual_objective(self) -> float:
        """Dual objective at the fitted multipliers."""
        check_fitted(self, "dual_coef_")
        if self.support_vectors_.shape[0] == 0:
            return 0.0
        K = gram_matrix(self.support_vectors_, kernel=self.kernel, gamma=self.gamma_)
        alpha_sum = float(np.abs(self.dual_coef_).sum())
        return alpha_sum - 0.5 * float(self.dual_coef_ @ (K @ self.dual_coef_))

    def kkt_violation(self, X, y) -> float:
        """Maximum KKT violation of this model on its training set."""
        check_fitted(self, "dual_coef_")
        X = as_float_matrix(X)
        y = as_label_vector(y)
        check_same_length(X, y, "X and y")
        check_feature_count(X, self.n_features_in_)
        if self.support_.size and (
            self.support_.max() >= X.shape[0]
            or not np.array_equal(X[self.support_], self.support_vectors_)
        ):
            raise ValueError(
                "X does not contain this model's support vectors at the "
                "recorded indices; pass the original training data"
            )
        alpha = np.zeros(X.shape[0])
        alpha[self.support_] = np.abs(self.dual_coef_)
        if self.support_.size:
            expected_y = np.sign(self.dual_coef_).astype(np.int64)
            if not np.array_equal(y[self.support_], expected_y):
                raise ValueError(
                    "y disagrees with the stored dual coefficient signs; "
                    "pass the original training labels"
                )
            K = cross_kernel(
                X, self.support_vectors_, kernel=self.kernel, gamma=self.gamma_
            )
            u = K @ self.dual_coef_
        else:
            u = np.zeros(X.shape[0])
        r = y * (u + self.intercept_) - 1.0
        return _violation_from_margins(r, alpha, self.c)

    @property
    def coef_(self) -> np.ndarray:
        """Primal weight vector; only the linear kernel has one."""
        check_fitted(self, "dual_coef_")
        if self.kernel != "linear":
            raise AttributeError("coef_ is only defined for the linear kernel")
        return self.dual_coef_ @ self.support_vectors_
