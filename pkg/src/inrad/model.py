"""Sine-activated MLP that maps time coordinates to signal values.

The network is a stack of sine layers sin(omega0 * (W h + b)) with a
plain linear read-out. A large omega0 on the first layer stretches the
narrow input interval so the network can resolve fine temporal detail;
hidden layers use a moderate omega0.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import FormatError, NumericError, SchemaError, ShapeError
from .nn import (
    Array,
    LayerCache,
    linear_layer_backward,
    linear_layer_forward,
    sine_layer_backward,
    sine_layer_forward,
)

CHECKPOINT_FORMAT = "inrad-checkpoint-v1"


@dataclass(frozen=True)
class SirenConfig:
    input_dim: int
    output_dim: int
    hidden_dim: int = 256
    n_hidden_layers: int = 3
    omega0_first: float = 3000.0
    omega0_hidden: float = 30.0
    seed: int = 0

    def __post_init__(self):
        for name in ("input_dim", "output_dim", "hidden_dim", "n_hidden_layers"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ShapeError(f"{name} must be a positive integer, got {value!r}")
        if not self.omega0_first > 0 or not self.omega0_hidden > 0:
            raise ShapeError("omega0 values must be positive")


@dataclass
class SirenModel:
    """Configuration plus one weight/bias pair per layer.

    weights[i] has shape (fan_out, fan_in); the last entry is the
    linear read-out. omega0s aligns with weights and is None for the
    read-out.
    """

    config: SirenConfig
    weights: list[Array]
    biases: list[Array]
    omega0s: list[float | None]

    def parameters(self) -> list[Array]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.append(w)
            out.append(b)
        return out

    def set_parameters(self, params: list[Array]) -> None:
        if len(params) != 2 * len(self.weights):
            raise ShapeError(
                f"expected {2 * len(self.weights)} parameter arrays, got {len(params)}"
            )
        for i in range(len(self.weights)):
            w, b = params[2 * i], params[2 * i + 1]
            if w.shape != self.weights[i].shape or b.shape != self.biases[i].shape:
                raise ShapeError(f"layer {i}: parameter shapes changed")
            self.weights[i] = w
            self.biases[i] = b


def init_model(config: SirenConfig) -> SirenModel:
    """Deterministic init from config.seed.

    First layer weights are uniform in [-1/fan_in, 1/fan_in]; every
    later layer (read-out included) uses [-s, s] with
    s = sqrt(6/fan_in)/omega0_hidden. Biases start at zero. Weight
    matrices are drawn in layer order, so equal seeds give equal models.
    """
    rng = np.random.default_rng(config.seed)
    dims = (
        [config.input_dim]
        + [config.hidden_dim] * config.n_hidden_layers
        + [config.output_dim]
    )
    weights, biases, omega0s = [], [], []
    for i in range(len(dims) - 1):
        fan_in, fan_out = dims[i], dims[i + 1]
        if i == 0:
            bound = 1.0 / fan_in
        else:
            bound = np.sqrt(6.0 / fan_in) / config.omega0_hidden
        weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
        if i == len(dims) - 2:
            omega0s.append(None)
        elif i == 0:
            omega0s.append(config.omega0_first)
        else:
            omega0s.append(config.omega0_hidden)
    return SirenModel(config, weights, biases, omega0s)


def _forward(model: SirenModel, coords: Array) -> tuple[Array, list[LayerCache]]:
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim != 2 or coords.shape[1] != model.config.input_dim:
        raise ShapeError(
            f"coords shape {coords.shape} does not match input_dim {model.config.input_dim}"
        )
    caches = []
    h = coords
    for w, b, omega0 in zip(model.weights, model.biases, model.omega0s):
        if omega0 is None:
            h, cache = linear_layer_forward(h, w, b)
        else:
            h, cache = sine_layer_forward(h, w, b, omega0)
        caches.append(cache)
    return h, caches


def forward(model: SirenModel, coords: Array) -> Array:
    """Predicted values for each coordinate row, shape (n, output_dim)."""
    return _forward(model, coords)[0]


def loss_and_grads(model: SirenModel, coords: Array, targets: Array) -> tuple[float, list[Array]]:
    """Mean squared l2 residual over rows, with gradients.

    loss = (1/n) * sum_i ||targets_i - out_i||^2. Gradients align with
    model.parameters().
    """
    targets = np.asarray(targets, dtype=np.float64)
    out, caches = _forward(model, coords)
    if targets.shape != out.shape:
        raise ShapeError(f"targets shape {targets.shape} != output shape {out.shape}")
    if not np.all(np.isfinite(targets)):
        raise NumericError("targets contain non-finite entries")
    n = out.shape[0]
    resid = out - targets
    loss = float((resid * resid).sum() / n)
    grad_out = (2.0 / n) * resid
    grads: list[Array] = [np.empty(0)] * (2 * len(caches))
    upstream = grad_out
    for i in range(len(caches) - 1, -1, -1):
        if model.omega0s[i] is None:
            upstream, gw, gb = linear_layer_backward(caches[i], upstream)
        else:
            upstream, gw, gb = sine_layer_backward(caches[i], upstream)
        grads[2 * i] = gw
        grads[2 * i + 1] = gb
    return loss, grads


def save_model(model: SirenModel, path) -> None:
    """Write a JSON checkpoint; floats keep full precision via repr."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "config": asdict(model.config),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_model(path) -> SirenModel:
    """Read a checkpoint written by save_model; round-trips bit-for-bit."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise SchemaError(f"{path}: not a {CHECKPOINT_FORMAT} checkpoint")
    for key in ("config", "weights", "biases"):
        if key not in payload:
            raise SchemaError(f"{path}: checkpoint missing {key!r}")
    try:
        config = SirenConfig(**payload["config"])
    except (TypeError, ShapeError) as exc:
        raise SchemaError(f"{path}: bad checkpoint config ({exc})") from exc
    fresh = init_model(config)
    weights = [np.asarray(w, dtype=np.float64) for w in payload["weights"]]
    biases = [np.asarray(b, dtype=np.float64) for b in payload["biases"]]
    if len(weights) != len(fresh.weights) or len(biases) != len(fresh.biases):
        raise SchemaError(f"{path}: checkpoint layer count does not match config")
    for i, (w, b) in enumerate(zip(weights, biases)):
        if w.shape != fresh.weights[i].shape or b.shape != fresh.biases[i].shape:
            raise SchemaError(f"{path}: layer {i} shapes do not match config")
    fresh.weights = weights
    fresh.biases = biases
    return fresh
