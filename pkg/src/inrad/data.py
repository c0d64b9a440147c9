"""Series containers, CSV loading, scaling, and synthetic data.

CSV layout: one row per timestamp, an optional leading timestamp
column ('YYYY-MM-DD HH:MM:SS'), one float column per feature, optional
header row. Files without timestamps get synthetic one-minute-spaced
ones starting 2021-01-01 00:00:00, with test continuing directly after
train. Label files hold one 0/1 per line, aligned with the test rows.

Multi-entity datasets live as <root>/<entity>/{train.csv, test.csv,
test_label.csv}.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .encodings import (
    DEFAULT_INTERVAL_SECONDS,
    Timestamp,
    assign_synthetic_timestamps,
    format_timestamp,
    parse_timestamp,
)
from .errors import (
    EmptyInputError,
    FormatError,
    InputError,
    ParseError,
    SchemaError,
    ShapeError,
    SynthSpecError,
)

Array = np.ndarray

TRAIN_FILE = "train.csv"
TEST_FILE = "test.csv"
LABEL_FILE = "test_label.csv"


@dataclass
class TimeSeries:
    """Aligned timestamps, values and (for test data) labels."""

    timestamps: list[Timestamp]
    values: Array  # (n, d)
    labels: Array | None = None  # (n,) of 0/1
    name: str = ""

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ShapeError(f"values must be 2-D, got shape {self.values.shape}")
        if self.values.shape[0] == 0:
            raise EmptyInputError("series has no rows")
        if not np.all(np.isfinite(self.values)):
            raise FormatError("values contain non-finite entries")
        if len(self.timestamps) != self.values.shape[0]:
            raise SchemaError(
                f"{len(self.timestamps)} timestamps for {self.values.shape[0]} rows"
            )
        for a, b in zip(self.timestamps, self.timestamps[1:]):
            if not a < b:
                raise SchemaError(
                    f"timestamps not strictly increasing at {format_timestamp(b)}"
                )
        if self.labels is not None:
            self.labels = np.asarray(self.labels).astype(np.int64)
            if self.labels.shape != (self.values.shape[0],):
                raise SchemaError(
                    f"{self.labels.shape[0]} labels for {self.values.shape[0]} rows"
                )
            if not np.isin(self.labels, (0, 1)).all():
                raise FormatError("labels must contain only 0 and 1")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ScalingStats:
    """Per-feature minima and maxima from whichever split fit them."""

    minimum: Array
    maximum: Array

    def __post_init__(self):
        object.__setattr__(self, "minimum", np.asarray(self.minimum, dtype=np.float64))
        object.__setattr__(self, "maximum", np.asarray(self.maximum, dtype=np.float64))
        if self.minimum.shape != self.maximum.shape or self.minimum.ndim != 1:
            raise ShapeError("scaling stats must be matching 1-D arrays")
        if np.any(self.maximum < self.minimum):
            raise ShapeError("maximum below minimum in scaling stats")


def fit_scaling(values: Array) -> ScalingStats:
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] == 0:
        raise ShapeError(f"need a non-empty 2-D array, got shape {values.shape}")
    return ScalingStats(values.min(axis=0), values.max(axis=0))


def scale(values: Array, stats: ScalingStats) -> Array:
    """Min-max map to [-1, 1]; constant features go to 0.

    Values outside the fitted range map outside [-1, 1] unclipped;
    out-of-range behaviour is signal, not noise, for anomaly scoring.
    """
    values = np.asarray(values, dtype=np.float64)
    span = stats.maximum - stats.minimum
    safe = np.where(span > 0, span, 1.0)
    scaled = 2.0 * (values - stats.minimum) / safe - 1.0
    return np.where(span > 0, scaled, 0.0)


def unscale(values: Array, stats: ScalingStats) -> Array:
    values = np.asarray(values, dtype=np.float64)
    span = stats.maximum - stats.minimum
    return np.where(span > 0, stats.minimum + (values + 1.0) * span / 2.0, stats.minimum)


@dataclass
class DatasetBundle:
    train: TimeSeries
    test: TimeSeries
    scaling: ScalingStats | None = None

    def __post_init__(self):
        if self.train.dim != self.test.dim:
            raise SchemaError(
                f"train has {self.train.dim} features, test has {self.test.dim}"
            )
        if not self.train.timestamps[-1] < self.test.timestamps[0]:
            raise SchemaError("test data must start after the training data ends")


# ---------------------------------------------------------------------------
# CSV reading and writing


def _read_rows(path) -> list[tuple[int, list[str]]]:
    try:
        fh = open(path, "r", newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    with fh:
        rows = []
        for number, row in enumerate(csv.reader(fh), start=1):
            cells = [cell.strip() for cell in row]
            if not cells or all(cell == "" for cell in cells):
                continue
            rows.append((number, cells))
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")
    return rows


def _parse_value(cell: str, path, line: int) -> float:
    try:
        value = float(cell)
    except ValueError as exc:
        raise FormatError(f"{path}: {cell!r} is not a number", line) from exc
    if not math.isfinite(value):
        raise FormatError(f"{path}: non-finite value {cell!r}", line)
    return value


def _looks_like_data(cells: list[str]) -> bool:
    def is_float(cell: str) -> bool:
        try:
            float(cell)
        except ValueError:
            return False
        return True

    first_ok = is_float(cells[0])
    if not first_ok:
        try:
            parse_timestamp(cells[0])
            first_ok = True
        except ParseError:
            return False
    return first_ok and all(is_float(cell) for cell in cells[1:])


def read_series_csv(path) -> tuple[list[Timestamp] | None, Array]:
    """Read one CSV; returns (timestamps or None, values of shape (n, d)).

    A first row that does not parse as data is treated as a header. The
    first data row decides whether a timestamp column is present and
    how many columns every following row must have.
    """
    rows = _read_rows(path)
    if not _looks_like_data(rows[0][1]):
        rows = rows[1:]
        if not rows:
            raise EmptyInputError(f"{path}: header but no data rows")
    first_cells = rows[0][1]
    try:
        parse_timestamp(first_cells[0])
        has_timestamps = True
    except ParseError:
        has_timestamps = False
    width = len(first_cells)
    if width - int(has_timestamps) < 1:
        raise SchemaError(f"{path}: rows have no value columns")

    timestamps: list[Timestamp] | None = [] if has_timestamps else None
    values = np.empty((len(rows), width - int(has_timestamps)), dtype=np.float64)
    for r, (line, cells) in enumerate(rows):
        if len(cells) != width:
            raise FormatError(
                f"{path}: expected {width} columns, got {len(cells)}", line
            )
        if has_timestamps:
            try:
                timestamps.append(parse_timestamp(cells[0]))
            except ParseError as exc:
                raise ParseError(f"{path}: {exc}", line) from exc
            cells = cells[1:]
        for c, cell in enumerate(cells):
            values[r, c] = _parse_value(cell, path, line)
    return timestamps, values


def read_labels_csv(path) -> Array:
    """Read one 0/1 per line; a single non-numeric leading row is skipped."""
    rows = _read_rows(path)
    if not _looks_like_data(rows[0][1]):
        rows = rows[1:]
        if not rows:
            raise EmptyInputError(f"{path}: header but no label rows")
    labels = np.empty(len(rows), dtype=np.int64)
    for r, (line, cells) in enumerate(rows):
        if len(cells) != 1:
            raise FormatError(f"{path}: expected one label per line", line)
        value = _parse_value(cells[0], path, line)
        if value not in (0.0, 1.0):
            raise FormatError(f"{path}: label must be 0 or 1, got {cells[0]!r}", line)
        labels[r] = int(value)
    return labels


def load_dataset(
    train_path,
    test_path,
    labels_path=None,
    interval_seconds: int = DEFAULT_INTERVAL_SECONDS,
    name: str = "",
) -> DatasetBundle:
    """Load a train/test pair, assigning timestamps where missing.

    Rows are never reordered. When both files lack a timestamp column,
    one evenly spaced sequence covers train then test. When only the
    test file lacks one, it continues from the last training timestamp
    at interval_seconds. A test file with timestamps but a train file
    without is rejected.
    """
    train_ts, train_values = read_series_csv(train_path)
    test_ts, test_values = read_series_csv(test_path)
    if train_values.shape[1] != test_values.shape[1]:
        raise SchemaError(
            f"train has {train_values.shape[1]} feature columns, "
            f"test has {test_values.shape[1]}"
        )
    labels = None
    if labels_path is not None:
        labels = read_labels_csv(labels_path)
        if labels.shape[0] != test_values.shape[0]:
            raise SchemaError(
                f"{labels.shape[0]} labels for {test_values.shape[0]} test rows"
            )
    n_train, n_test = train_values.shape[0], test_values.shape[0]
    if train_ts is None and test_ts is None:
        joint = assign_synthetic_timestamps(
            n_train + n_test, interval_seconds=interval_seconds
        )
        train_ts, test_ts = joint[:n_train], joint[n_train:]
    elif train_ts is not None and test_ts is None:
        test_ts = assign_synthetic_timestamps(
            n_test + 1, start=train_ts[-1], interval_seconds=interval_seconds
        )[1:]
    elif train_ts is None:
        raise SchemaError(
            "test file has a timestamp column but train file does not"
        )
    train = TimeSeries(train_ts, train_values, name=name)
    test = TimeSeries(test_ts, test_values, labels=labels, name=name)
    return DatasetBundle(train, test)


def write_series_csv(path, series: TimeSeries, header: bool = True) -> None:
    """Write timestamp plus feature columns; floats keep full precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if header:
            writer.writerow(["timestamp"] + [f"f{j}" for j in range(series.dim)])
        for ts, row in zip(series.timestamps, series.values):
            writer.writerow([format_timestamp(ts)] + [repr(float(v)) for v in row])


def write_labels_csv(path, labels: Array) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for value in labels:
            fh.write(f"{int(value)}\n")


def save_dataset(directory, bundle: DatasetBundle) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    write_series_csv(directory / TRAIN_FILE, bundle.train)
    write_series_csv(directory / TEST_FILE, bundle.test)
    if bundle.test.labels is not None:
        write_labels_csv(directory / LABEL_FILE, bundle.test.labels)


# ---------------------------------------------------------------------------
# Multi-entity layout


def list_entities(root) -> list[str]:
    root = Path(root)
    if not root.is_dir():
        raise InputError(f"{root} is not a directory")
    found = sorted(
        p.name
        for p in root.iterdir()
        if p.is_dir() and (p / TRAIN_FILE).is_file() and (p / TEST_FILE).is_file()
    )
    if not found:
        raise EmptyInputError(
            f"{root}: no entity directories with {TRAIN_FILE} and {TEST_FILE}"
        )
    return found


def load_entity(root, entity: str, interval_seconds: int = DEFAULT_INTERVAL_SECONDS) -> DatasetBundle:
    base = Path(root) / entity
    labels = base / LABEL_FILE
    return load_dataset(
        base / TRAIN_FILE,
        base / TEST_FILE,
        labels if labels.is_file() else None,
        interval_seconds=interval_seconds,
        name=entity,
    )


def dataset_stats(bundle: DatasetBundle) -> dict:
    """Row counts, width and labelled-anomaly share for one bundle."""
    stats = {
        "entity": bundle.train.name or "-",
        "train_rows": bundle.train.n,
        "test_rows": bundle.test.n,
        "features": bundle.train.dim,
    }
    if bundle.test.labels is not None:
        from .evaluation import label_segments

        stats["anomaly_points"] = int(bundle.test.labels.sum())
        stats["anomaly_rate"] = float(bundle.test.labels.mean())
        stats["anomaly_segments"] = len(label_segments(bundle.test.labels))
    else:
        stats["anomaly_points"] = None
        stats["anomaly_rate"] = None
        stats["anomaly_segments"] = None
    return stats


# ---------------------------------------------------------------------------
# Synthetic data

ANOMALY_KINDS = ("spike", "level_shift", "noise_burst")


@dataclass(frozen=True)
class AnomalySegment:
    start: int  # test-set index, half-open interval
    end: int
    kind: str
    feature: int
    magnitude: float

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "kind": self.kind,
            "feature": self.feature,
            "magnitude": self.magnitude,
        }


@dataclass(frozen=True)
class SynthSpec:
    """Description of a generated dataset.

    The base signal is a sum of n_waves random sinusoids per feature
    plus Gaussian noise, continuous across the train/test boundary.
    Anomalies are injected only into the test span, each on one
    feature, with at least one clean point between segments.
    """

    train_len: int = 2000
    test_len: int = 2000
    dim: int = 3
    n_anomalies: int = 3
    anomaly_kinds: tuple[str, ...] = ANOMALY_KINDS
    segment_len_range: tuple[int, int] = (3, 6)
    magnitude: float = 8.0
    noise_sigma: float = 0.07
    n_waves: int = 3
    period_range: tuple[float, float] = (160.0, 2800.0)
    amplitude_range: tuple[float, float] = (0.5, 1.5)
    interval_seconds: int = DEFAULT_INTERVAL_SECONDS
    seed: int = 0

    def __post_init__(self):
        if self.train_len < 1 or self.test_len < 1:
            raise SynthSpecError("train_len and test_len must be positive")
        if self.dim < 1:
            raise SynthSpecError(f"dim must be >= 1, got {self.dim}")
        if self.n_anomalies < 0:
            raise SynthSpecError(f"n_anomalies must be >= 0, got {self.n_anomalies}")
        unknown = [k for k in self.anomaly_kinds if k not in ANOMALY_KINDS]
        if unknown:
            raise SynthSpecError(f"unknown anomaly kinds {unknown}; choose from {ANOMALY_KINDS}")
        if self.n_anomalies > 0 and not self.anomaly_kinds:
            raise SynthSpecError("anomaly_kinds is empty but n_anomalies > 0")
        lo, hi = self.segment_len_range
        if not 1 <= lo <= hi:
            raise SynthSpecError(f"bad segment_len_range {self.segment_len_range}")
        if self.n_anomalies and self.n_anomalies * hi + self.n_anomalies - 1 > self.test_len:
            raise SynthSpecError(
                f"{self.n_anomalies} segments of up to {hi} points cannot fit "
                f"in {self.test_len} test points with gaps between them"
            )
        if self.magnitude <= 0 or self.noise_sigma < 0:
            raise SynthSpecError("magnitude must be positive and noise_sigma non-negative")
        if self.n_waves < 1:
            raise SynthSpecError(f"n_waves must be >= 1, got {self.n_waves}")
        if self.period_range[0] <= 0 or self.period_range[0] > self.period_range[1]:
            raise SynthSpecError(f"bad period_range {self.period_range}")
        if self.amplitude_range[0] <= 0 or self.amplitude_range[0] > self.amplitude_range[1]:
            raise SynthSpecError(f"bad amplitude_range {self.amplitude_range}")
        if self.interval_seconds < 1:
            raise SynthSpecError(f"interval_seconds must be >= 1, got {self.interval_seconds}")


def _place_segments(spec: SynthSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Non-overlapping segments with >= 1 clean point between them.

    Lengths are drawn first; the leftover space is split into random
    gaps, which always succeeds, keeping generation retry-free.
    """
    if spec.n_anomalies == 0:
        return []
    lo, hi = spec.segment_len_range
    lengths = rng.integers(lo, hi + 1, size=spec.n_anomalies)
    required = int(lengths.sum()) + spec.n_anomalies - 1
    free = spec.test_len - required
    if free < 0:
        raise SynthSpecError("anomaly segments do not fit in the test span")
    gaps = rng.multinomial(free, np.full(spec.n_anomalies + 1, 1.0 / (spec.n_anomalies + 1)))
    segments = []
    cursor = 0
    for k, length in enumerate(lengths):
        cursor += int(gaps[k]) + (1 if k > 0 else 0)
        segments.append((cursor, cursor + int(length)))
        cursor += int(length)
    return segments


def generate_synthetic(spec: SynthSpec) -> tuple[DatasetBundle, list[AnomalySegment]]:
    """Build a dataset from the spec; equal seeds give equal datasets."""
    rng = np.random.default_rng(spec.seed)
    total = spec.train_len + spec.test_len
    index = np.arange(total, dtype=np.float64)
    signal = np.zeros((total, spec.dim))
    for j in range(spec.dim):
        for _ in range(spec.n_waves):
            period = rng.uniform(*spec.period_range)
            amplitude = rng.uniform(*spec.amplitude_range)
            phase = rng.uniform(0.0, 2.0 * np.pi)
            signal[:, j] += amplitude * np.sin(2.0 * np.pi * index / period + phase)
    if spec.noise_sigma > 0:
        signal += rng.normal(0.0, spec.noise_sigma, size=signal.shape)

    test = signal[spec.train_len :]
    labels = np.zeros(spec.test_len, dtype=np.int64)
    inventory = []
    for k, (start, end) in enumerate(_place_segments(spec, rng)):
        # Kinds and features both cycle, so with dim == n_anomalies every
        # feature carries exactly one anomaly.
        kind = spec.anomaly_kinds[k % len(spec.anomaly_kinds)]
        feature = k % spec.dim
        width = end - start
        if kind == "spike":
            # Alternating signs put the spike train at the sampling
            # frequency, the hardest content for a smooth fit to absorb.
            test[start:end, feature] += spec.magnitude * (-1.0) ** np.arange(width)
        elif kind == "level_shift":
            test[start:end, feature] += spec.magnitude * float(rng.choice((-1.0, 1.0)))
        else:
            # Half-magnitude std keeps the burst's ~2-sigma extremes at the
            # same raw scale as the two offset anomalies.
            test[start:end, feature] += rng.normal(0.0, spec.magnitude / 2.0, size=width)
        labels[start:end] = 1
        inventory.append(AnomalySegment(start, end, kind, feature, spec.magnitude))

    timestamps = assign_synthetic_timestamps(total, interval_seconds=spec.interval_seconds)
    train_series = TimeSeries(timestamps[: spec.train_len], signal[: spec.train_len], name="synth")
    test_series = TimeSeries(timestamps[spec.train_len :], test, labels=labels, name="synth")
    return DatasetBundle(train_series, test_series), inventory
