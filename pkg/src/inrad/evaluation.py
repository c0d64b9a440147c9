"""Scoring and point-adjusted evaluation.

The anomaly score of a timestamp is the l1 norm of the reconstruction
residual in scaled space. Detection quality is measured after point
adjustment: if any point inside a contiguous ground-truth anomaly
scores above the threshold, the whole segment counts as detected. The
reported F1 is the best over all thresholds, found exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInputError, FormatError, NumericError, ShapeError
from .model import SirenModel, forward

Array = np.ndarray


def score_series(model: SirenModel, coords: Array, scaled_targets: Array) -> Array:
    """Per-row l1 residual ||x_t - f(c_t)||_1, shape (n,)."""
    scaled_targets = np.asarray(scaled_targets, dtype=np.float64)
    predictions = forward(model, coords)
    if scaled_targets.shape != predictions.shape:
        raise ShapeError(
            f"targets shape {scaled_targets.shape} != predictions shape {predictions.shape}"
        )
    scores = np.abs(scaled_targets - predictions).sum(axis=1)
    if not np.all(np.isfinite(scores)):
        raise NumericError("scores contain non-finite entries")
    return scores


def threshold_detect(scores: Array, threshold: float) -> Array:
    """Binary predictions: 1 where score is strictly above the threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise ShapeError(f"scores must be 1-D, got shape {scores.shape}")
    return (scores > threshold).astype(np.int64)


def _as_binary(values, name: str) -> Array:
    out = np.asarray(values)
    if out.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {out.shape}")
    out = out.astype(np.int64)
    if not np.isin(out, (0, 1)).all():
        raise FormatError(f"{name} must contain only 0 and 1")
    return out


def label_segments(labels: Array) -> list[tuple[int, int]]:
    """Maximal runs of 1s as half-open (start, end) index pairs."""
    labels = _as_binary(labels, "labels")
    padded = np.concatenate(([0], labels, [0]))
    change = np.flatnonzero(np.diff(padded))
    return list(zip(change[::2].tolist(), change[1::2].tolist()))


def point_adjust(predictions: Array, labels: Array) -> Array:
    """Spread each in-segment hit over its whole ground-truth segment.

    Points outside any labelled segment pass through unchanged.
    """
    predictions = _as_binary(predictions, "predictions")
    labels = _as_binary(labels, "labels")
    if predictions.shape != labels.shape:
        raise ShapeError(
            f"predictions length {predictions.shape[0]} != labels length {labels.shape[0]}"
        )
    adjusted = predictions.copy()
    for start, end in label_segments(labels):
        if adjusted[start:end].any():
            adjusted[start:end] = 1
        else:
            adjusted[start:end] = 0
    return adjusted


def prf1(predictions: Array, labels: Array) -> tuple[float, float, float]:
    """Precision, recall, F1 with the 0/0 -> 0 convention."""
    predictions = _as_binary(predictions, "predictions")
    labels = _as_binary(labels, "labels")
    if predictions.shape != labels.shape:
        raise ShapeError(
            f"predictions length {predictions.shape[0]} != labels length {labels.shape[0]}"
        )
    tp = int(((predictions == 1) & (labels == 1)).sum())
    fp = int(((predictions == 1) & (labels == 0)).sum())
    fn = int(((predictions == 0) & (labels == 1)).sum())
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f1: float
    threshold: float
    predictions: Array  # point-adjusted, at the chosen threshold


def best_f1_search(scores: Array, labels: Array, max_candidates: int | None = None) -> EvalResult:
    """Best point-adjusted F1 over thresholds, searched exactly.

    Candidate thresholds are -inf plus every distinct score. Because
    point adjustment only asks whether a segment's maximum score clears
    the threshold, F1 at any threshold is a function of per-segment
    maxima and the sorted out-of-segment scores, which a single sweep
    evaluates for all candidates at once. Ties prefer the smaller
    threshold (they never differ in recall at equal F1 and threshold).

    max_candidates, if given, subsamples the candidate set to evenly
    spaced quantiles; the result is then a lower bound on the best F1.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1:
        raise ShapeError(f"scores must be 1-D, got shape {scores.shape}")
    if scores.size == 0:
        raise EmptyInputError("no scores to evaluate")
    if not np.all(np.isfinite(scores)):
        raise NumericError("scores contain non-finite entries")
    labels = _as_binary(labels, "labels")
    if labels.shape != scores.shape:
        raise ShapeError(
            f"scores length {scores.shape[0]} != labels length {labels.shape[0]}"
        )

    segments = label_segments(labels)
    seg_max = np.array([scores[s:e].max() for s, e in segments], dtype=np.float64)
    seg_len = np.array([e - s for s, e in segments], dtype=np.int64)
    outside = np.sort(scores[labels == 0])
    total_positive = int(seg_len.sum())

    candidates = np.unique(scores)
    if max_candidates is not None and candidates.size > max_candidates:
        take = np.linspace(0, candidates.size - 1, max_candidates).round().astype(int)
        candidates = candidates[np.unique(take)]
    candidates = np.concatenate(([-np.inf], candidates))

    # tp per candidate: total length of segments whose max clears it.
    order = np.argsort(seg_max)
    suffix = np.concatenate((np.cumsum(seg_len[order][::-1])[::-1], [0]))
    tp = suffix[np.searchsorted(seg_max[order], candidates, side="right")]
    fp = outside.size - np.searchsorted(outside, candidates, side="right")

    predicted = tp + fp
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(predicted > 0, tp / np.maximum(predicted, 1), 0.0)
        recall = (
            tp / total_positive if total_positive else np.zeros_like(precision)
        )
        denom = precision + recall
        f1 = np.where(denom > 0, 2 * precision * recall / np.maximum(denom, 1e-300), 0.0)

    # Candidates ascend, so argmax lands on the smallest threshold among ties.
    best = int(np.argmax(f1))
    threshold = float(candidates[best])
    adjusted = point_adjust(threshold_detect(scores, threshold), labels)
    p, r, f = prf1(adjusted, labels)
    return EvalResult(p, r, f, threshold, adjusted)
