"""Soft-margin kernel SVM pipeline for binary hazardous-weather
classification: CSV ingestion, normalization, correlation feature selection,
SMOTE balancing, SMO training, cross-validated grid search, and metrics."""

from .datasets import (
    Dataset,
    haversine_km,
    label_from_reports,
    load_feature_csv,
    load_labeled_csv,
    save_labeled_csv,
)
from .errors import (
    ConvergenceError,
    CoordinateRangeError,
    DegenerateLabelsError,
    EmptyInputError,
    FeatureMismatchError,
    HazardSvmError,
    InsufficientMinorityError,
    LabelError,
    ModelFormatError,
    ModelVersionError,
    ParseError,
    ShapeError,
    StratificationError,
    TuningError,
)
from .kernels import (
    cross_kernel,
    default_gamma,
    gram_matrix,
    kernel_value,
    squared_distance,
)
from .metrics import (
    ConfusionMatrix,
    MetricReport,
    classification_metrics,
    confusion_counts,
    roc_auc,
    roc_points,
)
from .model_selection import (
    DEFAULT_C_GRID,
    DEFAULT_GAMMA_GRID,
    CvResult,
    GridCell,
    GridSearchResult,
    cross_validate,
    grid_search,
    stratified_kfold,
    stratified_split,
    write_grid_csv,
)
from .oversample import SmoteOversampler, minority_label, minority_neighbors
from .persistence import MODEL_FORMAT_VERSION, load_model, save_model
from .pipeline import HazardClassifier, derive_seed
from .preprocessing import CorrelationFeatureSelector, StandardNormalizer
from .svm import (
    KernelSvmClassifier,
    dual_objective_value,
    kkt_violation_value,
    principled_bias,
)

__version__ = "0.1.0"

__all__ = [
    "ConfusionMatrix",
    "ConvergenceError",
    "CoordinateRangeError",
    "CorrelationFeatureSelector",
    "CvResult",
    "DEFAULT_C_GRID",
    "DEFAULT_GAMMA_GRID",
    "Dataset",
    "DegenerateLabelsError",
    "EmptyInputError",
    "FeatureMismatchError",
    "GridCell",
    "GridSearchResult",
    "HazardClassifier",
    "HazardSvmError",
    "InsufficientMinorityError",
    "KernelSvmClassifier",
    "LabelError",
    "MODEL_FORMAT_VERSION",
    "MetricReport",
    "ModelFormatError",
    "ModelVersionError",
    "ParseError",
    "ShapeError",
    "SmoteOversampler",
    "StandardNormalizer",
    "StratificationError",
    "TuningError",
    "classification_metrics",
    "confusion_counts",
    "cross_kernel",
    "cross_validate",
    "default_gamma",
    "derive_seed",
    "dual_objective_value",
    "gram_matrix",
    "grid_search",
    "haversine_km",
    "kernel_value",
    "kkt_violation_value",
    "label_from_reports",
    "load_feature_csv",
    "load_labeled_csv",
    "load_model",
    "minority_label",
    "minority_neighbors",
    "principled_bias",
    "roc_auc",
    "roc_points",
    "save_labeled_csv",
    "save_model",
    "squared_distance",
    "stratified_kfold",
    "stratified_split",
    "write_grid_csv",
]
