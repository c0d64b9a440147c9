"""Training loop with early stopping, and the end-to-end pipeline.

Training is full-batch Adam by default. The loop watches the training
loss itself: when it fails to improve on the best seen value by a
relative margin for `patience` consecutive epochs, training stops and
the best parameters are restored. Every fit builds a fresh optimizer
state, so re-training on test data starts with clean Adam moments.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .data import DatasetBundle, ScalingStats, TimeSeries, fit_scaling, scale
from .encodings import (
    TemporalEncoderConfig,
    temporal_encode_series,
    vanilla_encode,
    vanilla_star_encode,
)
from .errors import ConfigError, NumericError, TrainingError
from .evaluation import score_series
from .model import SirenConfig, SirenModel, init_model, loss_and_grads
from .nn import AdamState, adam_step

Array = np.ndarray

MODES = ("warm_start", "cold_start")
ENCODERS = ("temporal", "vanilla", "vanilla_star")


@dataclass(frozen=True)
class TrainConfig:
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.99
    epsilon: float = 1e-8
    max_epochs: int = 10000
    patience: int = 30
    min_rel_improvement: float = 1e-6
    batch_size: int | None = None  # None trains full-batch
    seed: int = 0

    def __post_init__(self):
        if not self.lr > 0 or not self.epsilon > 0:
            raise ConfigError("lr and epsilon must be positive")
        if not 0 <= self.beta1 < 1 or not 0 <= self.beta2 < 1:
            raise ConfigError(f"betas must lie in [0, 1), got {self.beta1}, {self.beta2}")
        if self.max_epochs < 1:
            raise ConfigError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.patience < 1:
            raise ConfigError(f"patience must be >= 1, got {self.patience}")
        if self.min_rel_improvement < 0:
            raise ConfigError("min_rel_improvement must be >= 0")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")


@dataclass
class TrainReport:
    """What one fit did: the loss trace and how it ended."""

    loss_trace: list[float] = field(default_factory=list)
    stopping_epoch: int = 0
    best_epoch: int = 0
    best_loss: float = float("inf")
    hit_max_epochs: bool = False
    wall_seconds: float = 0.0
    seconds_per_epoch: float = 0.0

    def to_dict(self) -> dict:
        return {
            "stopping_epoch": self.stopping_epoch,
            "best_epoch": self.best_epoch,
            "best_loss": self.best_loss,
            "hit_max_epochs": self.hit_max_epochs,
            "wall_seconds": self.wall_seconds,
            "seconds_per_epoch": self.seconds_per_epoch,
            "loss_trace": self.loss_trace,
        }


def fit(model: SirenModel, coords: Array, targets: Array, cfg: TrainConfig | None = None) -> TrainReport:
    """Train in place; leaves the model at its best-loss parameters.

    Epoch e records the loss at the parameters entering that epoch
    (full-batch) or the running mean over its mini-batches. An epoch
    "improves" when its loss beats the previous best by at least
    min_rel_improvement relatively; patience non-improving epochs in a
    row stop the run.
    """
    cfg = cfg or TrainConfig()
    coords = np.asarray(coords, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    state = AdamState.for_params(
        model.parameters(), lr=cfg.lr, beta1=cfg.beta1, beta2=cfg.beta2, epsilon=cfg.epsilon
    )
    rng = np.random.default_rng(cfg.seed)
    n = coords.shape[0]
    report = TrainReport()
    best_params = [p.copy() for p in model.parameters()]
    bad_epochs = 0
    started = time.perf_counter()
    for epoch in range(1, cfg.max_epochs + 1):
        if cfg.batch_size is None:
            loss, grads = loss_and_grads(model, coords, targets)
        else:
            total = 0.0
            perm = rng.permutation(n)
            for lo in range(0, n, cfg.batch_size):
                idx = perm[lo : lo + cfg.batch_size]
                batch_loss, grads = loss_and_grads(model, coords[idx], targets[idx])
                if not np.isfinite(batch_loss):
                    raise TrainingError(
                        f"training loss became non-finite in epoch {epoch}",
                        last_epoch=epoch - 1,
                        last_loss=report.loss_trace[-1] if report.loss_trace else None,
                    )
                total += batch_loss * len(idx)
                _apply_step(model, grads, state, epoch)
            loss = total / n
        if not np.isfinite(loss):
            raise TrainingError(
                f"training loss became non-finite in epoch {epoch}",
                last_epoch=epoch - 1,
                last_loss=report.loss_trace[-1] if report.loss_trace else None,
            )
        report.loss_trace.append(float(loss))
        previous_best = report.best_loss
        if loss < report.best_loss:
            report.best_loss = float(loss)
            report.best_epoch = epoch
            best_params = [p.copy() for p in model.parameters()]
        if loss < previous_best * (1.0 - cfg.min_rel_improvement):
            bad_epochs = 0
        else:
            bad_epochs += 1
        if bad_epochs >= cfg.patience:
            break
        if cfg.batch_size is None:
            _apply_step(model, grads, state, epoch)
    else:
        report.hit_max_epochs = True
    report.stopping_epoch = len(report.loss_trace)
    report.wall_seconds = time.perf_counter() - started
    report.seconds_per_epoch = report.wall_seconds / max(report.stopping_epoch, 1)
    model.set_parameters(best_params)
    return report


def _apply_step(model: SirenModel, grads, state: AdamState, epoch: int) -> None:
    try:
        model.set_parameters(adam_step(model.parameters(), grads, state))
    except NumericError as exc:
        raise TrainingError(
            f"gradients became non-finite in epoch {epoch}", last_epoch=epoch
        ) from exc


@dataclass
class PipelineResult:
    model: SirenModel
    scores: Array
    scaling: ScalingStats
    encoder_config: TemporalEncoderConfig | None
    reports: dict[str, TrainReport]


def encode_for_mode(
    train: TimeSeries,
    test: TimeSeries,
    mode: str,
    encoder: str,
) -> tuple[Array | None, Array, TemporalEncoderConfig | None]:
    """Coordinates for the chosen mode; train coords are None cold."""
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {MODES}, got {mode!r}")
    if encoder not in ENCODERS:
        raise ConfigError(f"encoder must be one of {ENCODERS}, got {encoder!r}")
    if mode == "cold_start":
        if encoder == "temporal":
            enc = TemporalEncoderConfig.from_timestamps(test.timestamps)
            return None, temporal_encode_series(test.timestamps, enc), enc
        # With no training span, vanilla* degenerates to vanilla.
        return None, vanilla_encode(test.n), None
    if encoder == "temporal":
        enc = TemporalEncoderConfig.from_timestamps(train.timestamps, test.timestamps)
        return (
            temporal_encode_series(train.timestamps, enc),
            temporal_encode_series(test.timestamps, enc),
            enc,
        )
    if encoder == "vanilla":
        return vanilla_encode(train.n), vanilla_encode(test.n), None
    coords_train, coords_test = vanilla_star_encode(train.n, test.n)
    return coords_train, coords_test, None


def detect_pipeline(
    bundle: DatasetBundle,
    mode: str = "warm_start",
    encoder: str = "temporal",
    siren: SirenConfig | None = None,
    train_cfg: TrainConfig | None = None,
) -> PipelineResult:
    """Scale, encode, fit and score one dataset.

    Warm start fits the training span first, then re-trains the same
    network on the test span (fresh optimizer state); scaling comes
    from the training data. Cold start never touches the training
    split: scaling and the single fit use the test data alone.

    siren acts as a template; its input/output widths are replaced to
    match the encoder and the data.
    """
    train_cfg = train_cfg or TrainConfig()
    siren = siren or SirenConfig(input_dim=1, output_dim=1)
    coords_train, coords_test, enc_cfg = encode_for_mode(
        bundle.train, bundle.test, mode, encoder
    )
    if mode == "warm_start":
        stats = fit_scaling(bundle.train.values)
    else:
        stats = fit_scaling(bundle.test.values)
    test_scaled = scale(bundle.test.values, stats)
    cfg = replace(
        siren, input_dim=coords_test.shape[1], output_dim=bundle.test.dim
    )
    model = init_model(cfg)
    reports: dict[str, TrainReport] = {}
    if mode == "warm_start":
        train_scaled = scale(bundle.train.values, stats)
        reports["pretrain"] = fit(model, coords_train, train_scaled, train_cfg)
        reports["retrain"] = fit(model, coords_test, test_scaled, train_cfg)
    else:
        reports["fit"] = fit(model, coords_test, test_scaled, train_cfg)
    scores = score_series(model, coords_test, test_scaled)
    return PipelineResult(model, scores, stats, enc_cfg, reports)
