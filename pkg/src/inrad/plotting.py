"""Report figures, written as SVG files.

All functions save to a path and return it; nothing is shown
interactively. SVGs are written without a creation date so repeated
runs produce identical bytes.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

plt.rcParams.update(
    {
        "figure.figsize": (9.0, 3.4),
        "axes.grid": True,
        "grid.alpha": 0.3,
        "svg.hashsalt": "inrad",
    }
)

_SVG_KW = {"format": "svg", "metadata": {"Date": None}}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, **_SVG_KW)
    plt.close(fig)
    return path


def _shade_segments(ax, labels):
    from .evaluation import label_segments

    for start, end in label_segments(labels):
        ax.axvspan(start - 0.5, end - 0.5, color="tab:red", alpha=0.18, lw=0)


def save_score_plot(path, scores, labels=None, threshold=None, title="anomaly scores"):
    """Score trace with labelled segments shaded and the threshold drawn."""
    fig, ax = plt.subplots()
    ax.plot(np.asarray(scores), lw=0.8, color="tab:blue", label="score")
    if labels is not None:
        _shade_segments(ax, labels)
    if threshold is not None and np.isfinite(threshold):
        ax.axhline(threshold, color="tab:orange", ls="--", lw=1.0, label="threshold")
    ax.set_xlabel("test index")
    ax.set_ylabel("l1 residual")
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8)
    return _finish(fig, path)


def save_loss_plot(path, traces: dict, target: float | None = None, title="training loss"):
    """One log-scale loss curve per named fit."""
    fig, ax = plt.subplots()
    for name, trace in traces.items():
        ax.plot(np.arange(1, len(trace) + 1), trace, lw=1.0, label=name)
    if target is not None:
        ax.axhline(target, color="tab:red", ls=":", lw=1.0, label="target")
    ax.set_yscale("log")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.set_title(title)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def save_bench_plot(path, rows: list[dict], title="encoder benchmark"):
    """Epochs and wall seconds to the target loss, per encoder."""
    names = [row["encoder"] for row in rows]
    x = np.arange(len(names))
    fig, axes = plt.subplots(1, 2, figsize=(9.0, 3.4))
    for ax, key, label in (
        (axes[0], "epochs_to_target", "epochs to target"),
        (axes[1], "seconds_to_target", "seconds to target"),
    ):
        heights = [row[key] if row[key] is not None else np.nan for row in rows]
        bars = ax.bar(x, heights, color="tab:blue", width=0.6)
        for bar, row in zip(bars, rows):
            if row[key] is None:
                bar.set_color("tab:gray")
        ax.set_xticks(x)
        ax.set_xticklabels(names, rotation=15)
        ax.set_ylabel(label)
    fig.suptitle(title)
    return _finish(fig, path)


def save_sweep_plot(path, param: str, values, f1s, title=None):
    """Best F1 against the swept value."""
    fig, ax = plt.subplots()
    ax.plot(values, f1s, marker="o", lw=1.0, color="tab:blue")
    ax.set_xlabel(param)
    ax.set_ylabel("best F1")
    ax.set_ylim(0.0, 1.05)
    if max(values) > 0 and min(values) > 0 and max(values) / max(min(values), 1e-12) >= 64:
        ax.set_xscale("log")
    ax.set_title(title or f"sensitivity to {param}")
    return _finish(fig, path)


def save_series_preview(path, values, labels=None, title="generated test data"):
    """Feature traces stacked with a vertical offset; anomalies shaded."""
    values = np.asarray(values)
    fig, ax = plt.subplots()
    spread = np.ptp(values) or 1.0
    for j in range(values.shape[1]):
        ax.plot(values[:, j] + j * spread, lw=0.7, label=f"f{j}")
    if labels is not None:
        _shade_segments(ax, labels)
    ax.set_xlabel("test index")
    ax.set_yticks([])
    ax.set_title(title)
    ax.legend(loc="upper right", fontsize=8, ncol=min(values.shape[1], 4))
    return _finish(fig, path)
