"""Timestamps and the maps from time to network input coordinates.

Three encoders are provided:

* temporal: each calendar field (year, month, day, hour, minute,
  second) is mapped to [-1, 1] on its own axis, so one timestamp
  becomes a short vector. Field j with N_j possible values and base
  value b_j encodes k as 2*(k - b_j)/(N_j - 1) - 1; a field with a
  single possible value encodes as the constant -1.
* vanilla: index i of n points becomes the scalar (2/n)*i - 1 for
  i = 1..n, applied to train and test independently.
* vanilla*: train as vanilla; test index j continues past the training
  range as 1 + (2/n_train)*j.
"""
from __future__ import annotations

import datetime
import re
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, ParseError, RangeError, ShapeError

FIELD_NAMES = ("year", "month", "day", "hour", "minute", "second")

# Cardinality of each cyclic field; the year axis is sized per dataset.
_FIELD_COUNTS = {"month": 12, "day": 31, "hour": 24, "minute": 60, "second": 60}
_FIELD_BASES = {"month": 1, "day": 1, "hour": 0, "minute": 0, "second": 0}

_TIMESTAMP_RE = re.compile(
    r"^(\d{4})-(\d{2})-(\d{2}) (\d{2}):(\d{2}):(\d{2}(?:\.\d+)?)$"
)

DEFAULT_INTERVAL_SECONDS = 60


@dataclass(frozen=True, order=True)
class Timestamp:
    """A calendar timestamp; compares chronologically (field by field)."""

    year: int
    month: int
    day: int
    hour: int
    minute: int
    second: float

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise RangeError(f"month {self.month} outside 1..12")
        if not 1 <= self.day <= 31:
            raise RangeError(f"day {self.day} outside 1..31")
        if not 0 <= self.hour <= 23:
            raise RangeError(f"hour {self.hour} outside 0..23")
        if not 0 <= self.minute <= 59:
            raise RangeError(f"minute {self.minute} outside 0..59")
        if not 0 <= self.second < 60:
            raise RangeError(f"second {self.second} outside [0, 60)")


def parse_timestamp(text: str) -> Timestamp:
    """Parse 'YYYY-MM-DD HH:MM:SS[.ffffff]' into a Timestamp."""
    match = _TIMESTAMP_RE.match(text.strip())
    if match is None:
        raise ParseError(f"malformed timestamp {text!r}")
    year, month, day, hour, minute = (int(g) for g in match.groups()[:5])
    second = float(match.group(6))
    try:
        return Timestamp(year, month, day, hour, minute, second)
    except RangeError as exc:
        raise ParseError(f"timestamp {text!r}: {exc}") from exc


def format_timestamp(ts: Timestamp) -> str:
    whole = int(ts.second)
    frac = ts.second - whole
    if frac == 0.0:
        seconds = f"{whole:02d}"
    else:
        seconds = f"{ts.second:09.6f}".rstrip("0")
    return f"{ts.year:04d}-{ts.month:02d}-{ts.day:02d} {ts.hour:02d}:{ts.minute:02d}:{seconds}"


def _to_datetime(ts: Timestamp) -> tuple[datetime.datetime, float]:
    """Split into a whole-second datetime plus the fractional second."""
    whole = int(ts.second)
    try:
        dt = datetime.datetime(ts.year, ts.month, ts.day, ts.hour, ts.minute, whole)
    except ValueError as exc:
        raise RangeError(f"{format_timestamp(ts)} is not a valid calendar date") from exc
    return dt, ts.second - whole


def assign_synthetic_timestamps(
    n_points: int,
    start: Timestamp = Timestamp(2021, 1, 1, 0, 0, 0.0),
    interval_seconds: int = DEFAULT_INTERVAL_SECONDS,
) -> list[Timestamp]:
    """Evenly spaced timestamps for data that shipped without any.

    The default start and one-minute spacing match common practice for
    benchmark sets distributed as bare value matrices.
    """
    if n_points < 1:
        raise EmptyInputError("need at least one point to assign timestamps")
    if interval_seconds < 1:
        raise RangeError(f"interval must be a positive second count, got {interval_seconds}")
    base, frac = _to_datetime(start)
    out = []
    for i in range(n_points):
        try:
            dt = base + datetime.timedelta(seconds=i * interval_seconds)
        except OverflowError as exc:
            raise RangeError(f"timestamp sequence overflows the calendar at point {i}") from exc
        out.append(
            Timestamp(dt.year, dt.month, dt.day, dt.hour, dt.minute, dt.second + frac)
        )
    return out


@dataclass(frozen=True)
class TemporalEncoderConfig:
    """Year axis layout plus the subset of fields actually encoded.

    anchor_year is the year of the first training timestamp and maps to
    -1; the year axis spans n_years consecutive years so the last
    observed year maps to +1 (a single-year dataset stays at -1).
    """

    anchor_year: int
    n_years: int = 1
    active_fields: tuple[str, ...] = FIELD_NAMES

    def __post_init__(self):
        if self.n_years < 1:
            raise RangeError(f"n_years must be >= 1, got {self.n_years}")
        bad = [f for f in self.active_fields if f not in FIELD_NAMES]
        if bad:
            raise RangeError(f"unknown fields {bad}; choose from {FIELD_NAMES}")
        if len(set(self.active_fields)) != len(self.active_fields):
            raise RangeError("active_fields contains duplicates")
        # Canonical field order keeps the coordinate layout predictable.
        ordered = tuple(f for f in FIELD_NAMES if f in self.active_fields)
        object.__setattr__(self, "active_fields", ordered)

    @property
    def dim(self) -> int:
        return len(self.active_fields)

    @classmethod
    def from_timestamps(
        cls,
        *series: list[Timestamp],
        active_fields: tuple[str, ...] = FIELD_NAMES,
    ) -> "TemporalEncoderConfig":
        """Anchor at the earliest year, span through the latest observed."""
        years = [ts.year for group in series for ts in group]
        if not years:
            raise EmptyInputError("no timestamps to derive an encoder from")
        anchor = min(years)
        return cls(anchor, max(years) - anchor + 1, active_fields)


def _field_axis(field: str, k: np.ndarray, cfg: TemporalEncoderConfig) -> np.ndarray:
    if field == "year":
        count, base = cfg.n_years, cfg.anchor_year
    else:
        count, base = _FIELD_COUNTS[field], _FIELD_BASES[field]
    if count == 1:
        return np.full(k.shape, -1.0)
    # Multiply before dividing so base and extreme values land exactly
    # on -1 and +1.
    return 2.0 * (k - base) / (count - 1) - 1.0


def temporal_encode(ts: Timestamp, cfg: TemporalEncoderConfig) -> np.ndarray:
    return temporal_encode_series([ts], cfg)[0]


def temporal_encode_series(
    timestamps: list[Timestamp], cfg: TemporalEncoderConfig
) -> np.ndarray:
    """Encode timestamps to an (n, cfg.dim) coordinate array."""
    if not timestamps:
        raise EmptyInputError("no timestamps to encode")
    last_year = cfg.anchor_year + cfg.n_years - 1
    for ts in timestamps:
        if not cfg.anchor_year <= ts.year <= last_year:
            raise RangeError(
                f"year {ts.year} outside encoder range "
                f"{cfg.anchor_year}..{last_year}"
            )
    columns = []
    for name in cfg.active_fields:
        k = np.array([getattr(ts, name) for ts in timestamps], dtype=np.float64)
        columns.append(_field_axis(name, k, cfg))
    return np.column_stack(columns)


def vanilla_encode(n_points: int) -> np.ndarray:
    """Scalar coordinates (2/n)*i - 1 for i = 1..n, shape (n, 1)."""
    if n_points < 1:
        raise EmptyInputError("vanilla encoding needs at least one point")
    i = np.arange(1, n_points + 1, dtype=np.float64)
    return ((2.0 / n_points) * i - 1.0).reshape(-1, 1)


def vanilla_star_encode(n_train: int, n_test: int) -> tuple[np.ndarray, np.ndarray]:
    """Train as vanilla; test continues on the same axis past +1."""
    if n_train < 1:
        raise EmptyInputError("vanilla* encoding needs at least one training point")
    if n_test < 0:
        raise ShapeError(f"negative test length {n_test}")
    train = vanilla_encode(n_train)
    j = np.arange(1, n_test + 1, dtype=np.float64)
    test = (1.0 + (2.0 / n_train) * j).reshape(-1, 1)
    return train, test
