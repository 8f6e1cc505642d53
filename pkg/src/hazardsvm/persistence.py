"""Model file save/load.

The on-disk format is a single JSON document with sorted keys and
full-precision floats (Python's shortest round-trip repr), so two models
trained with the same seed serialize byte-identically apart from the
timestamp, and reloaded models reproduce decision values bit-for-bit.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone

import numpy as np

from ._validation import check_fitted
from .errors import ModelFormatError, ModelVersionError
from .pipeline import HazardClassifier
from .preprocessing import CorrelationFeatureSelector, StandardNormalizer
from .svm import KernelSvmClassifier

MODEL_FORMAT_VERSION = 1

_TOP_LEVEL_KEYS = (
    "format_version",
    "created_utc",
    "kernel",
    "c",
    "bias",
    "support_vectors",
    "dual_coefficients",
    "support_indices",
    "normalization",
    "feature_mask",
    "feature_names",
    "metadata",
)


def save_model(model: HazardClassifier, path, timestamp=None) -> None:
    """Serialize a fitted pipeline; ``timestamp`` pins created_utc for tests."""
    check_fitted(model, "svm_")
    check_fitted(model.svm_, "dual_coef_")
    if timestamp is None:
        timestamp = datetime.now(timezone.utc)
    if isinstance(timestamp, datetime):
        timestamp = timestamp.isoformat()
    svm = model.svm_
    correlations = [
        None if r is None else float(r) for r in model.selector_.correlations_
    ]
    document = {
        "format_version": MODEL_FORMAT_VERSION,
        "created_utc": str(timestamp),
        "kernel": {
            "kind": model.kernel,
            "gamma": None if svm.gamma_ is None else float(svm.gamma_),
        },
        "c": float(model.c),
        "bias": float(svm.intercept_),
        "support_vectors": [[float(v) for v in row] for row in svm.support_vectors_],
        "dual_coefficients": [float(v) for v in svm.dual_coef_],
        "support_indices": [int(i) for i in svm.support_],
        "normalization": {
            "mean": [float(v) for v in model.normalizer_.mean_],
            "std": [float(v) for v in model.normalizer_.std_],
        },
        "feature_mask": {
            "kept_indices": [int(i) for i in model.selector_.kept_indices_],
            "correlations": correlations,
        },
        "feature_names": list(model.feature_names_),
        "metadata": {
            "n_train_samples": int(model.n_train_samples_),
            "n_positive": int(model.n_positive_),
            "n_negative": int(model.n_negative_),
            "n_synthetic": int(model.n_synthetic_),
            "seed": int(model.seed),
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require(mapping, key, where="model file"):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ModelFormatError(f"{where} is missing required key {key!r}")
    return mapping[key]


def load_model(path) -> HazardClassifier:
    """Reconstruct a fitted ``HazardClassifier`` from ``save_model`` output."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (json.JSONDecodeError, UnicodeDecodeError) as err:
        raise ModelFormatError(f"model file is not valid JSON: {err}") from None
    if not isinstance(document, dict):
        raise ModelFormatError("model file must contain a JSON object")
    version = _require(document, "format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ModelVersionError(
            f"unsupported format_version {version!r}, expected {MODEL_FORMAT_VERSION}"
        )
    for key in _TOP_LEVEL_KEYS:
        _require(document, key)

    kernel = _require(document["kernel"], "kind", "kernel section")
    gamma = _require(document["kernel"], "gamma", "kernel section")
    metadata = document["metadata"]
    for key in ("n_train_samples", "n_positive", "n_negative", "n_synthetic", "seed"):
        _require(metadata, key, "metadata section")

    try:
        mean = np.asarray(document["normalization"]["mean"], dtype=np.float64)
        std = np.asarray(document["normalization"]["std"], dtype=np.float64)
        kept = np.asarray(document["feature_mask"]["kept_indices"], dtype=np.intp)
        correlations = tuple(
            None if r is None else float(r)
            for r in document["feature_mask"]["correlations"]
        )
        support_vectors = np.asarray(document["support_vectors"], dtype=np.float64)
        dual_coef = np.asarray(document["dual_coefficients"], dtype=np.float64)
        support = np.asarray(document["support_indices"], dtype=np.intp)
        bias = float(document["bias"])
        c = float(document["c"])
        feature_names = tuple(str(n) for n in document["feature_names"])
    except (KeyError, TypeError, ValueError) as err:
        raise ModelFormatError(f"model file field has a bad shape or type: {err}") from None

    n_features = len(feature_names)
    if support_vectors.size == 0:
        support_vectors = support_vectors.reshape(0, kept.size)
    if (
        mean.ndim != 1
        or mean.shape != std.shape
        or mean.size != n_features
        or len(correlations) != n_features
        or support_vectors.ndim != 2
        or support_vectors.shape[0] != dual_coef.size
        or support_vectors.shape[0] != support.size
        or support_vectors.shape[1] != kept.size
        or (kept.size and kept.max() >= n_features)
    ):
        raise ModelFormatError("model file sections disagree on dimensions")
    if kernel == "rbf" and not (gamma is not None and np.isfinite(gamma) and gamma > 0):
        raise ModelFormatError(f"rbf kernel requires positive gamma, got {gamma}")

    model = HazardClassifier(kernel=kernel, gamma=gamma, c=c, seed=int(metadata["seed"]))
    normalizer = StandardNormalizer()
    normalizer.mean_ = mean
    normalizer.std_ = std
    normalizer.n_features_in_ = n_features
    selector = CorrelationFeatureSelector()
    selector.kept_indices_ = kept
    selector.correlations_ = correlations
    selector.n_features_in_ = n_features
    svm = KernelSvmClassifier(kernel=kernel, gamma=gamma, c=c)
    svm.support_vectors_ = support_vectors
    svm.dual_coef_ = dual_coef
    svm.support_ = support
    svm.intercept_ = bias
    svm.gamma_ = None if gamma is None else float(gamma)
    svm.n_features_in_ = kept.size

    model.feature_names_ = feature_names
    model.n_features_in_ = n_features
    model.normalizer_ = normalizer
    model.selector_ = selector
    model.svm_ = svm
    model.n_train_samples_ = int(metadata["n_train_samples"])
    model.n_positive_ = int(metadata["n_positive"])
    model.n_negative_ = int(metadata["n_negative"])
    model.n_synthetic_ = int(metadata["n_synthetic"])
    return model
