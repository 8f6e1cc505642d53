"""Exception types shared across the package.

Every exception carries a short machine-greppable ``code``; the CLI prefixes
diagnostics with it as ``error: <code>: <message>``.
"""


class HazardSvmError(Exception):
    """Base class for all package errors."""

    code = "internal"


class ParseError(HazardSvmError, ValueError):
    """A CSV cell, row, or timestamp could not be parsed."""

    code = "parse"

    def __init__(self, message, *, source=None, line=None, column=None):
        parts = []
        if source is not None:
            parts.append(str(source))
        if line is not None:
            parts.append(f"line {line}")
        if column is not None:
            parts.append(f"column {column!r}")
        if parts:
            message = f"{message} ({', '.join(parts)})"
        super().__init__(message)
        self.source = source
        self.line = line
        self.column = column


class LabelError(HazardSvmError, ValueError):
    """A label token or value is not one of the recognized forms."""

    code = "label"


class EmptyInputError(HazardSvmError, ValueError):
    """An operation received no data to work on."""

    code = "empty"


class ShapeError(HazardSvmError, ValueError):
    """Array dimensions do not agree with what the operation requires."""

    code = "shape"


class CoordinateRangeError(HazardSvmError, ValueError):
    """A latitude or longitude lies outside its valid range."""

    code = "range"


class FeatureMismatchError(HazardSvmError, ValueError):
    """Dataset feature names do not match the model's recorded names."""

    code = "features"


class DegenerateLabelsError(HazardSvmError, ValueError):
    """Only one class is present where both are required."""

    code = "degenerate"


class InsufficientMinorityError(HazardSvmError, ValueError):
    """The minority class is too small for synthetic oversampling."""

    code = "smote"


class StratificationError(HazardSvmError, ValueError):
    """A class has too few samples for the requested stratified partition."""

    code = "stratify"


class ConvergenceError(HazardSvmError):
    """SMO did not reach the KKT tolerance within its iteration budget.

    Carries the best iterate seen (``model``, a fitted classifier) and that
    iterate's KKT violation so callers can inspect or salvage it.
    """

    code = "converge"

    def __init__(self, message, *, model=None, kkt_violation=None):
        super().__init__(message)
        self.model = model
        self.kkt_violation = kkt_violation


class TuningError(HazardSvmError):
    """Cross-validation or grid search produced no usable configuration."""

    code = "tune"


class ModelFormatError(HazardSvmError, ValueError):
    """A model file is truncated, corrupt, or structurally invalid."""

    code = "format"


class ModelVersionError(ModelFormatError):
    """A model file declares an unsupported format version."""

    code = "version"
