"""Command-line interface: ingest, train, tune, evaluate, predict.

Every failure path prints a single diagnostic line to standard error with a
machine-greppable prefix (``error: <code>: <message>``) and exits nonzero.
"""

from __future__ import annotations

import csv
import functools
import sys

import click
import numpy as np

from .datasets import load_feature_csv, load_labeled_csv, label_from_reports, save_labeled_csv
from .errors import DegenerateLabelsError, FeatureMismatchError, HazardSvmError
from .metrics import classification_metrics, confusion_counts, roc_auc
from .model_selection import grid_search, write_grid_csv
from .persistence import load_model, save_model
from .pipeline import HazardClassifier


def _reporting_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except HazardSvmError as err:
            click.echo(f"error: {err.code}: {err}", err=True)
            sys.exit(1)
        except OSError as err:
            click.echo(f"error: io: {err}", err=True)
            sys.exit(1)
        except ValueError as err:
            click.echo(f"error: args: {err}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
def main():
    """Train, tune, evaluate, and apply a kernel SVM hazard classifier."""


@main.command()
@click.option("--observations", required=True, help="Weather observation CSV.")
@click.option("--reports", required=True, help="Storm report CSV.")
@click.option("--window-secs", default=3600.0, show_default=True,
              help="Max |time difference| for a report to count.")
@click.option("--radius-km", default=50.0, show_default=True,
              help="Max great-circle distance for a report to count.")
@click.option("--output", required=True, help="Labeled dataset CSV to write.")
@_reporting_errors
def ingest(observations, reports, window_secs, radius_km, output):
    """Join observations with storm reports into a labeled dataset."""
    data = label_from_reports(observations, reports, window_secs, radius_km)
    save_labeled_csv(data, output)
    hazardous, normal = data.class_counts()
    click.echo(f"hazardous: {hazardous}")
    click.echo(f"normal: {normal}")


def _model_options(fn):
    decorators = [
        click.option("--kernel", type=click.Choice(["rbf", "linear"]),
                     default="rbf", show_default=True),
        click.option("--gamma", type=float, default=None,
                     help="RBF width; default derives from feature variance."),
        click.option("--c", type=float, default=1.0, show_default=True,
                     help="Soft-margin penalty."),
        click.option("--min-abs-r", default=0.1, show_default=True,
                     help="Correlation threshold for keeping a feature."),
        click.option("--smote/--no-smote", default=False, show_default=True,
                     help="Oversample the minority class before training."),
        click.option("--k-neighbors", default=5, show_default=True),
        click.option("--target-ratio", default=1.0, show_default=True,
                     help="Minority/majority ratio after oversampling."),
        click.option("--seed", default=0, show_default=True),
    ]
    for decorator in reversed(decorators):
        fn = decorator(fn)
    return fn


@main.command()
@click.option("--data", required=True, help="Labeled dataset CSV.")
@click.option("--model-out", required=True, help="Model JSON to write.")
@_model_options
@click.option("--tolerance", default=1e-3, show_default=True,
              help="KKT tolerance defining convergence.")
@click.option("--max-passes", default=10, show_default=True)
@click.option("--max-iter", default=10_000, show_default=True)
@_reporting_errors
def train(data, model_out, kernel, gamma, c, min_abs_r, smote, k_neighbors,
          target_ratio, seed, tolerance, max_passes, max_iter):
    """Fit the full pipeline on a labeled dataset and save the model."""
    dataset = load_labeled_csv(data)
    model = HazardClassifier(
        kernel=kernel, gamma=gamma, c=c, min_abs_r=min_abs_r, smote=smote,
        k_neighbors=k_neighbors, target_ratio=target_ratio, tol=tolerance,
        max_passes=max_passes, max_iter=max_iter, seed=seed,
    )
    model.fit(dataset.X, dataset.y, feature_names=dataset.feature_names)
    save_model(model, model_out)
    click.echo(f"support vectors: {model.svm_.support_.size}")
    click.echo(f"kkt violation: {model.svm_.kkt_violation_!r}")


def _parse_grid(text, name):
    values = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        try:
            values.append(float(token))
        except ValueError:
            raise ValueError(f"invalid {name} value {token!r}") from None
    return values


@main.command()
@click.option("--data", required=True, help="Labeled dataset CSV.")
@click.option("--report-out", required=True, help="Grid CSV to write.")
@click.option("--c-grid", default="0.1,1,10,100", show_default=True,
              help="Comma-separated C values.")
@click.option("--gamma-grid", default="0.01,0.1,1,10", show_default=True,
              help="Comma-separated gamma values.")
@click.option("--k", default=5, show_default=True, help="Cross-validation folds.")
@click.option("--min-abs-r", default=0.1, show_default=True)
@click.option("--smote/--no-smote", default=False, show_default=True)
@click.option("--k-neighbors", default=5, show_default=True)
@click.option("--target-ratio", default=1.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@_reporting_errors
def tune(data, report_out, c_grid, gamma_grid, k, min_abs_r, smote,
         k_neighbors, target_ratio, seed):
    """Grid-search (C, gamma) by stratified cross-validated F1."""
    dataset = load_labeled_csv(data)
    base = HazardClassifier(min_abs_r=min_abs_r, smote=smote,
                            k_neighbors=k_neighbors, target_ratio=target_ratio)
    result = grid_search(
        dataset,
        _parse_grid(c_grid, "c-grid"),
        _parse_grid(gamma_grid, "gamma-grid"),
        k=k, seed=seed, base_model=base,
    )
    write_grid_csv(result, report_out)
    mean_f1 = result.best_cell().cv.means["f1"]
    click.echo(f"best c: {result.best_c!r}")
    click.echo(f"best gamma: {result.best_gamma!r}")
    click.echo(f"mean f1: {'undefined' if mean_f1 is None else repr(mean_f1)}")


def _check_feature_names(found, expected):
    found, expected = tuple(found), tuple(expected)
    if found == expected:
        return
    for position, (name, wanted) in enumerate(zip(found, expected), start=1):
        if name != wanted:
            raise FeatureMismatchError(
                f"feature column {position} is {name!r}, model expects {wanted!r}"
            )
    raise FeatureMismatchError(
        f"dataset has {len(found)} feature columns, model expects {len(expected)}"
    )


def _metric_lines(report, cm, fmt):
    def text_value(value):
        return "undefined" if value is None else f"{value:.4f}"

    def kv_value(value):
        return "undefined" if value is None else repr(value)

    if fmt == "text":
        return [
            f"accuracy:  {text_value(report.accuracy)}",
            f"precision: {text_value(report.precision)}",
            f"recall:    {text_value(report.recall)}",
            f"f1:        {text_value(report.f1)}",
            f"auc:       {text_value(report.auc)}",
            f"confusion: tp={cm.tp} fp={cm.fp} fn={cm.fn} tn={cm.tn}",
        ]
    return [
        f"accuracy={kv_value(report.accuracy)}",
        f"precision={kv_value(report.precision)}",
        f"recall={kv_value(report.recall)}",
        f"f1={kv_value(report.f1)}",
        f"auc={kv_value(report.auc)}",
        f"tp={cm.tp}",
        f"fp={cm.fp}",
        f"fn={cm.fn}",
        f"tn={cm.tn}",
    ]


@main.command()
@click.option("--model", "model_path", required=True, help="Model JSON.")
@click.option("--data", required=True, help="Labeled dataset CSV.")
@click.option("--report-out", default=None, help="Also write the report here.")
@click.option("--format", "fmt", type=click.Choice(["text", "kv"]),
              default="text", show_default=True,
              help="kv emits key=value lines for scripting.")
@_reporting_errors
def evaluate(model_path, data, report_out, fmt):
    """Score a saved model against a labeled dataset."""
    model = load_model(model_path)
    dataset = load_labeled_csv(data)
    _check_feature_names(dataset.feature_names, model.feature_names_)
    scores = model.decision_function(dataset.X)
    predictions = np.where(scores >= 0.0, 1, -1)
    cm = confusion_counts(predictions, dataset.y)
    try:
        auc = roc_auc(scores, dataset.y)
    except DegenerateLabelsError:
        auc = None
    report = classification_metrics(cm, auc=auc)
    lines = _metric_lines(report, cm, fmt)
    for line in lines:
        click.echo(line)
    if report_out is not None:
        with open(report_out, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


@main.command()
@click.option("--model", "model_path", required=True, help="Model JSON.")
@click.option("--input", "input_path", required=True,
              help="Feature CSV without a label column.")
@click.option("--output", required=True, help="Prediction CSV to write.")
@_reporting_errors
def predict(model_path, input_path, output):
    """Append decision values and labels to an unlabeled feature CSV."""
    model = load_model(model_path)
    names, X, raw_rows = load_feature_csv(input_path)
    _check_feature_names(names, model.feature_names_)
    scores = model.decision_function(X)
    with open(output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(names) + ["decision_value", "label"])
        for row, score in zip(raw_rows, scores):
            writer.writerow(row + [repr(float(score)), "1" if score >= 0 else "-1"])


if __name__ == "__main__":
    main()
