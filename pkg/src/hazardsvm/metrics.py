"""Binary classification metrics: confusion counts, accuracy/precision/
recall/F1, ROC curve points, and ROC-AUC.

The positive class is +1 (hazardous). Metrics whose defining ratio is 0/0
are reported as ``None`` rather than 0 or NaN: imbalanced weather data hits
those cases routinely and a silent zero would corrupt model selection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from ._validation import as_float_vector, as_label_vector, check_same_length
from .errors import DegenerateLabelsError, EmptyInputError


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with positive = +1: tp + fp + fn + tn equals the sample count."""

    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricReport:
    """Scalar metrics in [0, 1]; ``None`` marks an undefined (0/0) value."""

    accuracy: float | None
    precision: float | None
    recall: float | None
    f1: float | None
    auc: float | None = None

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "auc": self.auc,
        }


METRIC_NAMES = ("accuracy", "precision", "recall", "f1", "auc")


def confusion_counts(predictions, truths) -> ConfusionMatrix:
    """Tally predictions against ground truth (positive class = +1)."""
    predictions = as_label_vector(predictions, "predictions")
    truths = as_label_vector(truths, "truths")
    check_same_length(predictions, truths, "predictions and truths")
    if truths.size == 0:
        raise EmptyInputError("cannot build a confusion matrix from zero samples")
    pos_pred = predictions == 1
    pos_true = truths == 1
    return ConfusionMatrix(
        tp=int(np.sum(pos_pred & pos_true)),
        fp=int(np.sum(pos_pred & ~pos_true)),
        fn=int(np.sum(~pos_pred & pos_true)),
        tn=int(np.sum(~pos_pred & ~pos_true)),
    )


def classification_metrics(cm: ConfusionMatrix, auc: float | None = None) -> MetricReport:
    """Derive accuracy, precision, recall, and F1 from counts.

    F1 is computed directly from counts as ``2*tp / (2*tp + fp + fn)``, which
    equals the harmonic mean of precision and recall whenever both are
    defined and not simultaneously zero.
    """
    total = cm.total
    if total == 0:
        raise EmptyInputError("confusion matrix has zero total count")
    accuracy = (cm.tp + cm.tn) / total
    precision = cm.tp / (cm.tp + cm.fp) if cm.tp + cm.fp > 0 else None
    recall = cm.tp / (cm.tp + cm.fn) if cm.tp + cm.fn > 0 else None
    if precision is None or recall is None or (precision == 0 and recall == 0):
        f1 = None
    else:
        f1 = 2 * cm.tp / (2 * cm.tp + cm.fp + cm.fn)
    return MetricReport(accuracy=accuracy, precision=precision, recall=recall,
                        f1=f1, auc=auc)


def _check_scored(scores, truths):
    scores = as_float_vector(scores, "scores")
    truths = as_label_vector(truths, "truths")
    check_same_length(scores, truths, "scores and truths")
    if truths.size == 0:
        raise EmptyInputError("no scored samples")
    if np.unique(truths).size < 2:
        raise DegenerateLabelsError("ROC analysis needs both classes present")
    return scores, truths


def roc_points(scores, truths) -> list[tuple[float, float]]:
    """(fpr, tpr) pairs from sweeping thresholds over the distinct scores.

    The prediction rule at threshold t is ``score >= t -> +1``. Thresholds
    run from a sentinel above the maximum (yielding (0, 0)) down through each
    distinct score; the lowest yields (1, 1). Points come out ordered by
    increasing fpr, then tpr.
    """
    scores, truths = _check_scored(scores, truths)
    P = int(np.sum(truths == 1))
    N = truths.size - P
    order = np.argsort(-scores, kind="stable")
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < scores.size:
        j = i
        while j < scores.size and scores[order[j]] == scores[order[i]]:
            if truths[order[j]] == 1:
                tp += 1
            else:
                fp += 1
            j += 1
        points.append((fp / N, tp / P))
        i = j
    return points


def roc_auc(scores, truths) -> float:
    """Area under the ROC curve via the rank (Mann-Whitney) statistic.

    Equals the fraction of (positive, negative) pairs where the positive
    outscores the negative, ties counting one half; identical to the
    trapezoidal area under :func:`roc_points`.
    """
    scores, truths = _check_scored(scores, truths)
    P = int(np.sum(truths == 1))
    N = truths.size - P
    ranks = rankdata(scores, method="average")
    rank_sum = float(ranks[truths == 1].sum())
    return (rank_sum - P * (P + 1) / 2) / (P * N)
