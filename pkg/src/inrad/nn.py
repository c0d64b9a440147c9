"""Dense layer primitives and the Adam optimizer.

Everything here works on plain float64 numpy arrays. Layers are pure
functions returning (output, cache); the cache feeds the matching
backward function. Weights use the (fan_out, fan_in) convention, so a
forward pass is ``inputs @ weights.T + bias``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericError, ShapeError

Array = np.ndarray


def as_matrix(values, name: str = "array") -> Array:
    """Coerce to a 2-D float64 array, rejecting anything non-finite."""
    out = np.asarray(values, dtype=np.float64)
    if out.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise NumericError(f"{name} contains non-finite entries")
    return out


def matmul(a: Array, b: Array) -> Array:
    """Matrix product with an explicit shape check.

    numpy does the arithmetic; this wrapper exists so shape mistakes
    surface as ShapeError with both operand shapes in the message.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shapes do not chain: {a.shape} @ {b.shape}")
    return a @ b


def _check_layer_shapes(inputs: Array, weights: Array, bias: Array) -> None:
    if inputs.ndim != 2:
        raise ShapeError(f"layer inputs must be 2-D, got shape {inputs.shape}")
    if weights.ndim != 2:
        raise ShapeError(f"weights must be 2-D, got shape {weights.shape}")
    if inputs.shape[1] != weights.shape[1]:
        raise ShapeError(
            f"input width {inputs.shape[1]} != weight fan-in {weights.shape[1]}"
        )
    if bias.shape != (weights.shape[0],):
        raise ShapeError(f"bias shape {bias.shape} != ({weights.shape[0]},)")


@dataclass
class LayerCache:
    """Values retained by a forward pass for the backward pass.

    ``scaled_pre`` is omega0 * (inputs @ W.T + b) for sine layers and the
    plain pre-activation for linear layers (omega0 is None there).
    """

    inputs: Array
    weights: Array
    scaled_pre: Array
    omega0: float | None


def sine_layer_forward(
    inputs: Array, weights: Array, bias: Array, omega0: float
) -> tuple[Array, LayerCache]:
    """y = sin(omega0 * (x @ W.T + b)). Note omega0 scales the bias too."""
    _check_layer_shapes(inputs, weights, bias)
    if not omega0 > 0:
        raise ShapeError(f"omega0 must be positive, got {omega0}")
    # Built up in place: full-batch training calls this every epoch, and
    # the (n, hidden) temporaries dominate the allocation traffic.
    scaled = inputs @ weights.T
    scaled += bias
    scaled *= omega0
    return np.sin(scaled), LayerCache(inputs, weights, scaled, omega0)


def sine_layer_backward(cache: LayerCache, upstream: Array) -> tuple[Array, Array, Array]:
    """Return (grad_inputs, grad_weights, grad_bias) for a sine layer."""
    if cache.omega0 is None:
        raise ShapeError("cache came from a linear layer")
    if upstream.shape != cache.scaled_pre.shape:
        raise ShapeError(
            f"upstream shape {upstream.shape} != output shape {cache.scaled_pre.shape}"
        )
    dpre = np.cos(cache.scaled_pre)
    dpre *= cache.omega0
    dpre *= upstream
    return dpre @ cache.weights, dpre.T @ cache.inputs, dpre.sum(axis=0)


def linear_layer_forward(inputs: Array, weights: Array, bias: Array) -> tuple[Array, LayerCache]:
    """y = x @ W.T + b."""
    _check_layer_shapes(inputs, weights, bias)
    pre = inputs @ weights.T
    pre += bias
    return pre, LayerCache(inputs, weights, pre, None)


def linear_layer_backward(cache: LayerCache, upstream: Array) -> tuple[Array, Array, Array]:
    if upstream.shape != cache.scaled_pre.shape:
        raise ShapeError(
            f"upstream shape {upstream.shape} != output shape {cache.scaled_pre.shape}"
        )
    return upstream @ cache.weights, upstream.T @ cache.inputs, upstream.sum(axis=0)


@dataclass
class AdamState:
    """First/second moment accumulators plus the step counter.

    One (m, v) pair per parameter array, in the same order the parameter
    list is passed to adam_step.
    """

    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.99
    epsilon: float = 1e-8
    t: int = 0
    m: list[Array] = field(default_factory=list)
    v: list[Array] = field(default_factory=list)

    @classmethod
    def for_params(
        cls,
        params: list[Array],
        lr: float = 1e-4,
        beta1: float = 0.9,
        beta2: float = 0.99,
        epsilon: float = 1e-8,
    ) -> "AdamState":
        if not 0 <= beta1 < 1 or not 0 <= beta2 < 1:
            raise ShapeError(f"betas must lie in [0, 1), got {beta1}, {beta2}")
        if not lr > 0 or not epsilon > 0:
            raise ShapeError(f"lr and epsilon must be positive, got {lr}, {epsilon}")
        return cls(
            lr=lr,
            beta1=beta1,
            beta2=beta2,
            epsilon=epsilon,
            t=0,
            m=[np.zeros_like(p) for p in params],
            v=[np.zeros_like(p) for p in params],
        )


def adam_step(params: list[Array], grads: list[Array], state: AdamState) -> list[Array]:
    """One bias-corrected Adam update. Mutates state, returns new params.

    update: theta -= lr * mhat / (sqrt(vhat) + eps), i.e. epsilon sits
    outside the square root.
    """
    if len(params) != len(grads) or len(params) != len(state.m):
        raise ShapeError(
            f"got {len(params)} params, {len(grads)} grads, state holds {len(state.m)}"
        )
    for i, (p, g) in enumerate(zip(params, grads)):
        if p.shape != g.shape or p.shape != state.m[i].shape:
            raise ShapeError(
                f"param {i}: shapes {p.shape} / {g.shape} / {state.m[i].shape} differ"
            )
        if not np.all(np.isfinite(g)):
            raise NumericError(f"param {i}: gradient contains non-finite entries")
    state.t += 1
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    out = []
    for i, (p, g) in enumerate(zip(params, grads)):
        # Moment updates run in place (same operations, same rounding);
        # only the bias-corrected intermediates get fresh arrays.
        m, v = state.m[i], state.v[i]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        gg = g * g
        gg *= 1.0 - state.beta2
        v *= state.beta2
        v += gg
        step = m / bc1
        step *= state.lr
        denom = v / bc2
        np.sqrt(denom, out=denom)
        denom += state.epsilon
        step /= denom
        out.append(p - step)
    return out
