"""Dataset container and CSV ingestion.

Two file families are understood, both UTF-8 with a header row and comma
separators:

* labeled datasets: feature columns followed by a final ``label`` column
  whose cells are ``1``/``-1`` or the aliases ``hazard``/``normal``;
* observation/report pairs: weather observations (timestamp, lat, lon,
  temperature, humidity, wind_speed, wind_direction, pressure) joined
  against storm reports (timestamp, lat, lon, event_type) to derive labels.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import (
    CoordinateRangeError,
    EmptyInputError,
    LabelError,
    ParseError,
    ShapeError,
)

EARTH_RADIUS_KM = 6371.0

LABEL_TOKENS = {"1": 1, "-1": -1, "hazard": 1, "normal": -1}

OBSERVATION_COLUMNS = (
    "timestamp", "lat", "lon", "temperature", "humidity",
    "wind_speed", "wind_direction", "pressure",
)
REPORT_COLUMNS = ("timestamp", "lat", "lon", "event_type")

JOINED_FEATURE_NAMES = (
    "temperature", "humidity", "wind_speed",
    "wind_dir_sin", "wind_dir_cos", "pressure",
)


@dataclass(frozen=True, eq=False)
class Dataset:
    """Immutable labeled dataset: a feature matrix, +-1 labels, and names."""

    feature_names: tuple[str, ...]
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        names = tuple(str(n) for n in self.feature_names)
        if any(not n for n in names):
            raise ValueError("feature names must be non-empty")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        X = np.array(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise ShapeError(f"X must be 2-dimensional, got ndim={X.ndim}")
        if X.shape[1] != len(names):
            raise ShapeError(
                f"X has {X.shape[1]} columns but {len(names)} feature names"
            )
        if X.size and not np.isfinite(X).all():
            raise ValueError("feature values must be finite")
        y = np.array(self.y, dtype=np.int64)
        if y.ndim != 1 or y.shape[0] != X.shape[0]:
            raise ShapeError("y must be 1-dimensional with one label per sample")
        if y.size and not np.isin(y, (1, -1)).all():
            raise LabelError("labels must be +1 or -1")
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "feature_names", names)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
        )

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(positive, negative) sample counts."""
        pos = int(np.sum(self.y == 1))
        return pos, self.y.size - pos

    def subset(self, indices) -> "Dataset":
        idx = np.asarray(indices, dtype=np.intp)
        return Dataset(self.feature_names, self.X[idx], self.y[idx])


def _open_text(source):
    """Yield a text stream for a path, text stream, or byte stream."""
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data), getattr(source, "name", "<stream>")
    path = Path(source)
    return io.StringIO(path.read_text(encoding="utf-8")), str(path)


def _parse_float_cell(cell, *, source, line, column):
    try:
        value = float(cell)
    except ValueError:
        raise ParseError(
            f"cell {cell!r} is not a number", source=source, line=line, column=column
        ) from None
    if not math.isfinite(value):
        raise ParseError(
            f"cell {cell!r} is not finite", source=source, line=line, column=column
        )
    return value


def _read_rows(source, delimiter=","):
    stream, name = _open_text(source)
    reader = csv.reader(stream, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyInputError(f"{name}: file is empty") from None
    header = [h.strip() for h in header]
    rows = [(reader.line_num, row) for row in reader if row]
    return name, header, rows


def load_labeled_csv(source, delimiter: str = ",") -> Dataset:
    """Read a labeled dataset CSV (header row, final column named ``label``)."""
    name, header, rows = _read_rows(source, delimiter)
    if not header or header[-1] != "label":
        raise ParseError("last column must be named 'label'", source=name, line=1)
    feature_names = header[:-1]
    if len(set(feature_names)) != len(feature_names):
        raise ParseError("duplicate feature column names", source=name, line=1)
    if any(not n for n in feature_names):
        raise ParseError("empty feature column name", source=name, line=1)
    width = len(header)
    X = np.empty((len(rows), width - 1))
    y = np.empty(len(rows), dtype=np.int64)
    for i, (line, row) in enumerate(rows):
        if len(row) != width:
            raise ParseError(
                f"expected {width} columns, found {len(row)}", source=name, line=line
            )
        for j, cell in enumerate(row[:-1]):
            X[i, j] = _parse_float_cell(
                cell, source=name, line=line, column=feature_names[j]
            )
        token = row[-1].strip()
        if token not in LABEL_TOKENS:
            raise LabelError(
                f"{name}: line {line}: unknown label token {token!r} "
                "(expected 1, -1, hazard, or normal)"
            )
        y[i] = LABEL_TOKENS[token]
    return Dataset(tuple(feature_names), X, y)


def save_labeled_csv(dataset: Dataset, path) -> None:
    """Write a dataset in the load_labeled_csv format, full float precision."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(list(dataset.feature_names) + ["label"])
        for i in range(dataset.n_samples):
            row = [repr(float(v)) for v in dataset.X[i]]
            row.append("1" if dataset.y[i] == 1 else "-1")
            writer.writerow(row)


def load_feature_csv(source, delimiter: str = ","):
    """Read an unlabeled feature CSV.

    Returns ``(feature_names, X, raw_rows)`` where raw_rows preserves the
    original cell strings for faithful echoing.
    """
    name, header, rows = _read_rows(source, delimiter)
    if any(not n for n in header):
        raise ParseError("empty feature column name", source=name, line=1)
    if len(set(header)) != len(header):
        raise ParseError("duplicate feature column names", source=name, line=1)
    X = np.empty((len(rows), len(header)))
    raw = []
    for i, (line, row) in enumerate(rows):
        if len(row) != len(header):
            raise ParseError(
                f"expected {len(header)} columns, found {len(row)}",
                source=name, line=line,
            )
        for j, cell in enumerate(row):
            X[i, j] = _parse_float_cell(cell, source=name, line=line, column=header[j])
        raw.append(list(row))
    return tuple(header), X, raw


def haversine_km(lat1, lon1, lat2, lon2) -> np.ndarray | float:
    """Great-circle distance on a sphere of radius 6371 km; accepts arrays."""
    lat1, lon1 = np.radians(lat1), np.radians(lon1)
    lat2, lon2 = np.radians(lat2), np.radians(lon2)
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    a = np.sin(dlat / 2) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2) ** 2
    return EARTH_RADIUS_KM * 2 * np.arcsin(np.sqrt(a))


def _parse_timestamp(cell, *, source, line):
    text = cell.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    try:
        stamp = datetime.fromisoformat(text)
    except ValueError:
        raise ParseError(
            f"invalid ISO-8601 timestamp {cell!r}", source=source, line=line
        ) from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp.timestamp()


def _check_lat_lon(lat, lon, *, source, line):
    if not -90.0 <= lat <= 90.0:
        raise CoordinateRangeError(
            f"{source}: line {line}: latitude {lat} outside [-90, 90]"
        )
    if not -180.0 <= lon <= 180.0:
        raise CoordinateRangeError(
            f"{source}: line {line}: longitude {lon} outside [-180, 180]"
        )


def _column_map(header, required, source):
    missing = [c for c in required if c not in header]
    if missing:
        raise ParseError(
            f"missing required column(s) {missing}", source=source, line=1
        )
    return {c: header.index(c) for c in required}


def label_from_reports(
    observations,
    reports,
    window_secs: float = 3600.0,
    radius_km: float = 50.0,
) -> Dataset:
    """Join weather observations against storm reports to derive labels.

    An observation is labeled +1 iff some report lies within ``window_secs``
    (absolute time difference) and within ``radius_km`` great-circle distance
    of it. Wind direction is cyclically encoded as (sin, cos) so that 359 and
    1 degrees land next to each other in feature space.
    """
    if window_secs < 0:
        raise ValueError(f"window_secs must be >= 0, got {window_secs}")
    if radius_km < 0:
        raise ValueError(f"radius_km must be >= 0, got {radius_km}")

    obs_name, obs_header, obs_rows = _read_rows(observations)
    rep_name, rep_header, rep_rows = _read_rows(reports)
    obs_cols = _column_map(obs_header, OBSERVATION_COLUMNS, obs_name)
    rep_cols = _column_map(rep_header, REPORT_COLUMNS, rep_name)

    rep_time = np.empty(len(rep_rows))
    rep_lat = np.empty(len(rep_rows))
    rep_lon = np.empty(len(rep_rows))
    for i, (line, row) in enumerate(rep_rows):
        if len(row) != len(rep_header):
            raise ParseError(
                f"expected {len(rep_header)} columns, found {len(row)}",
                source=rep_name, line=line,
            )
        rep_time[i] = _parse_timestamp(row[rep_cols["timestamp"]],
                                       source=rep_name, line=line)
        lat = _parse_float_cell(row[rep_cols["lat"]],
                                source=rep_name, line=line, column="lat")
        lon = _parse_float_cell(row[rep_cols["lon"]],
                                source=rep_name, line=line, column="lon")
        _check_lat_lon(lat, lon, source=rep_name, line=line)
        rep_lat[i], rep_lon[i] = lat, lon

    X = np.empty((len(obs_rows), len(JOINED_FEATURE_NAMES)))
    y = np.empty(len(obs_rows), dtype=np.int64)
    for i, (line, row) in enumerate(obs_rows):
        if len(row) != len(obs_header):
            raise ParseError(
                f"expected {len(obs_header)} columns, found {len(row)}",
                source=obs_name, line=line,
            )

        def cell(column):
            return _parse_float_cell(row[obs_cols[column]],
                                     source=obs_name, line=line, column=column)

        when = _parse_timestamp(row[obs_cols["timestamp"]],
                                source=obs_name, line=line)
        lat, lon = cell("lat"), cell("lon")
        _check_lat_lon(lat, lon, source=obs_name, line=line)
        theta = math.radians(cell("wind_direction"))
        X[i] = (
            cell("temperature"), cell("humidity"), cell("wind_speed"),
            math.sin(theta), math.cos(theta), cell("pressure"),
        )

        in_window = np.abs(rep_time - when) <= window_secs
        hazardous = False
        if in_window.any():
            dist = haversine_km(lat, lon, rep_lat[in_window], rep_lon[in_window])
            hazardous = bool((dist <= radius_km).any())
        y[i] = 1 if hazardous else -1

    return Dataset(JOINED_FEATURE_NAMES, X, y)
