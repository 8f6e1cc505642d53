"""Stratified splitting, cross-validation, and (C, gamma) grid search.

Fold partitions depend only on the dataset and the seed, so every grid cell
is scored on identical folds (paired comparison). Each fold's training run
gets its own child seed derived from (seed, fold index); results are
independent of evaluation order.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import clone

from .datasets import Dataset
from .errors import ConvergenceError, DegenerateLabelsError, StratificationError, TuningError
from .metrics import METRIC_NAMES, MetricReport, classification_metrics, confusion_counts, roc_auc
from .pipeline import HazardClassifier, derive_seed

DEFAULT_C_GRID = (0.1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA_GRID = (0.01, 0.1, 1.0, 10.0)

GRID_CSV_COLUMNS = ("c", "gamma", "mean_f1", "std_f1", "mean_accuracy", "mean_auc", "failed_folds")


def _class_indices(data: Dataset):
    # Fixed class order (+1 first) keeps shuffles reproducible.
    pos = np.flatnonzero(data.y == 1)
    neg = np.flatnonzero(data.y == -1)
    if pos.size == 0 or neg.size == 0:
        raise DegenerateLabelsError("stratification requires both classes present")
    return pos, neg


def stratified_split(data: Dataset, test_fraction: float, seed: int = 0):
    """Split into (train, test) preserving class proportions.

    Per class the test count is round(count * fraction), half away from
    zero, capped at count - 1 so every class keeps a training sample.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train_parts, test_parts = [], []
    for indices in _class_indices(data):
        shuffled = indices[rng.permutation(indices.size)]
        n_test = min(int(indices.size * test_fraction + 0.5), indices.size - 1)
        test_parts.append(shuffled[:n_test])
        train_parts.append(shuffled[n_test:])
    train = np.sort(np.concatenate(train_parts))
    test = np.sort(np.concatenate(test_parts))
    return data.subset(train), data.subset(test)


def stratified_kfold(data: Dataset, k: int = 5, seed: int = 0):
    """k (train, validation) pairs whose validation parts partition the data.

    Per-class counts across validation folds differ by at most one.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    rng = np.random.default_rng(seed)
    assignments = [[] for _ in range(k)]
    for indices in _class_indices(data):
        if indices.size < k:
            raise StratificationError(
                f"a class has {indices.size} samples, fewer than k={k}"
            )
        shuffled = indices[rng.permutation(indices.size)]
        for fold in range(k):
            assignments[fold].append(shuffled[fold::k])
    folds = []
    mask = np.empty(data.n_samples, dtype=bool)
    for parts in assignments:
        validation = np.sort(np.concatenate(parts))
        mask[:] = True
        mask[validation] = False
        folds.append((data.subset(np.flatnonzero(mask)), data.subset(validation)))
    return folds


@dataclass(frozen=True)
class CvResult:
    """Cross-validation outcome: one report per fold that converged.

    ``means``/``stds`` (population) are taken over the folds where each
    metric is defined; a metric undefined everywhere aggregates to ``None``.
    ``fold_fingerprint`` hashes the validation parts in fold order, so two
    runs scored on identical partitions carry identical fingerprints.
    """

    fold_reports: tuple[MetricReport, ...]
    means: dict = field(repr=False)
    stds: dict = field(repr=False)
    failed_folds: int = 0
    fold_fingerprint: str = ""


def _fingerprint(folds) -> str:
    digest = hashlib.sha256()
    for _, validation in folds:
        digest.update(validation.X.tobytes())
        digest.update(validation.y.tobytes())
    return digest.hexdigest()[:16]


def _aggregate(reports, failed: int, fingerprint: str) -> CvResult:
    means, stds = {}, {}
    for name in METRIC_NAMES:
        values = [getattr(r, name) for r in reports if getattr(r, name) is not None]
        means[name] = float(np.mean(values)) if values else None
        stds[name] = float(np.std(values)) if values else None
    return CvResult(tuple(reports), means, stds, failed, fingerprint)


def _cross_validate(data: Dataset, model, k: int, seed: int) -> CvResult:
    folds = stratified_kfold(data, k, seed)
    reports = []
    failed = 0
    for fold_index, (train, validation) in enumerate(folds):
        estimator = clone(model)
        estimator.set_params(seed=derive_seed(seed, fold_index))
        try:
            estimator.fit(train.X, train.y)
        except ConvergenceError:
            failed += 1
            continue
        scores = estimator.decision_function(validation.X)
        predictions = np.where(scores >= 0.0, 1, -1)
        cm = confusion_counts(predictions, validation.y)
        auc = roc_auc(scores, validation.y)
        reports.append(classification_metrics(cm, auc=auc))
    return _aggregate(reports, failed, _fingerprint(folds))


def cross_validate(data: Dataset, model=None, k: int = 5, seed: int = 0) -> CvResult:
    """Score ``model`` (a fresh HazardClassifier when omitted) across k folds.

    A fold whose training fails to converge is counted, not propagated; only
    when every fold fails does the call raise ``TuningError``.
    """
    if model is None:
        model = HazardClassifier()
    result = _cross_validate(data, model, k, seed)
    if result.failed_folds == k:
        raise TuningError(f"all {k} folds failed to converge")
    return result


@dataclass(frozen=True)
class GridCell:
    c: float
    gamma: float
    cv: CvResult


@dataclass(frozen=True)
class GridSearchResult:
    table: tuple[GridCell, ...]
    best_c: float
    best_gamma: float
    selection_metric: str = "f1"

    def best_cell(self) -> GridCell:
        for cell in self.table:
            if cell.c == self.best_c and cell.gamma == self.best_gamma:
                return cell
        raise LookupError("best configuration missing from table")


def _check_grid(grid, name: str) -> tuple[float, ...]:
    values = tuple(float(v) for v in grid)
    if not values:
        raise ValueError(f"{name} must not be empty")
    if any(not np.isfinite(v) or v <= 0 for v in values):
        raise ValueError(f"{name} values must be finite and > 0, got {values}")
    return values


def _ranking_key(cell: GridCell):
    mean = cell.cv.means["f1"]
    # Any non-converged fold demotes a cell below every clean one; an
    # undefined mean sits below every defined one. Ties prefer smaller C,
    # then smaller gamma.
    return (cell.cv.failed_folds > 0, mean is None, -(mean or 0.0), cell.c, cell.gamma)


def grid_search(
    data: Dataset,
    c_grid=DEFAULT_C_GRID,
    gamma_grid=DEFAULT_GAMMA_GRID,
    k: int = 5,
    seed: int = 0,
    base_model=None,
) -> GridSearchResult:
    """Exhaustive (C, gamma) search scored by mean validation F1.

    Every cell reuses the fold partition derived from ``seed``. Raises
    ``TuningError`` only when no configuration converges on any fold.
    """
    c_grid = _check_grid(c_grid, "c_grid")
    gamma_grid = _check_grid(gamma_grid, "gamma_grid")
    if base_model is None:
        base_model = HazardClassifier()
    cells = []
    for c in c_grid:
        for gamma in gamma_grid:
            model = clone(base_model)
            model.set_params(c=c, gamma=gamma)
            cells.append(GridCell(c, gamma, _cross_validate(data, model, k, seed)))
    if all(cell.cv.failed_folds == k for cell in cells):
        raise TuningError("every (c, gamma) configuration failed to converge")
    best = min(cells, key=_ranking_key)
    return GridSearchResult(tuple(cells), best.c, best.gamma)


def write_grid_csv(result: GridSearchResult, path) -> None:
    """Full-precision grid table; undefined aggregates become empty cells."""

    def cell_text(value):
        return "" if value is None else repr(float(value))

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRID_CSV_COLUMNS)
        for cell in result.table:
            writer.writerow(
                [
                    repr(cell.c),
                    repr(cell.gamma),
                    cell_text(cell.cv.means["f1"]),
                    cell_text(cell.cv.stds["f1"]),
                    cell_text(cell.cv.means["accuracy"]),
                    cell_text(cell.cv.means["auc"]),
                    cell.cv.failed_folds,
                ]
            )
