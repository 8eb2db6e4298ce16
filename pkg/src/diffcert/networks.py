"""Feed-forward ReLU network model, JSON I/O, and exact execution.

The affine step of `forward` accumulates column-by-column instead of
calling into BLAS. A sequential accumulation makes the execution
invariant under inserting zero activations (adding an exact 0.0 term
never changes a float sum), which is what makes zero-padded and
physically pruned networks agree bit-for-bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DimensionError, ParseError, ShapeError


class Activation(str, Enum):
    RELU = "relu"
    IDENTITY = "identity"


@dataclass(frozen=True)
class Layer:
    weight: np.ndarray  # (n_out, n_in)
    bias: np.ndarray  # (n_out,)
    activation: Activation

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=np.float64)
        b = np.asarray(self.bias, dtype=np.float64)
        if w.ndim != 2:
            raise ShapeError(f"weight must be 2-D, got shape {w.shape}")
        if b.ndim != 1 or b.shape[0] != w.shape[0]:
            raise ShapeError(
                f"bias length {b.shape} does not match weight rows {w.shape[0]}"
            )
        if not (np.isfinite(w).all() and np.isfinite(b).all()):
            raise ValueError("weights and biases must be finite")
        w.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)

    @property
    def n_out(self) -> int:
        return self.weight.shape[0]

    @property
    def n_in(self) -> int:
        return self.weight.shape[1]


@dataclass(frozen=True)
class Network:
    layers: tuple[Layer, ...]
    input_dim: int = field(init=False)
    output_dim: int = field(init=False)

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise ShapeError("network needs at least one layer")
        prev = layers[0].n_in
        for k, layer in enumerate(layers):
            if layer.n_in != prev:
                raise ShapeError(
                    f"layer {k}: expects {prev} inputs, weight has {layer.n_in} columns"
                )
            prev = layer.n_out
        for k, layer in enumerate(layers[:-1]):
            if layer.activation is not Activation.RELU:
                raise ShapeError(f"hidden layer {k} must use relu activation")
        if layers[-1].activation is not Activation.IDENTITY:
            raise ShapeError("output layer must use identity activation")
        object.__setattr__(self, "layers", layers)
        object.__setattr__(self, "input_dim", layers[0].n_in)
        object.__setattr__(self, "output_dim", layers[-1].n_out)

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    def widths(self) -> list[int]:
        return [layer.n_out for layer in self.layers]


@dataclass(frozen=True)
class InputRegion:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        if lo.ndim != 1 or lo.shape != hi.shape:
            raise ShapeError("lower/upper must be 1-D vectors of equal length")
        if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
            raise ValueError("region bounds must be finite")
        if np.any(lo > hi):
            raise ValueError("region has lower > upper")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.shape[0]

    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))

    def widths(self) -> np.ndarray:
        return self.upper - self.lower


def affine(weight: np.ndarray, bias: np.ndarray, x_hat: np.ndarray) -> np.ndarray:
    """Sequential-accumulation affine map, batched over rows of x_hat.

    x_hat: (B, n_in) or (n_in,). Accumulation order is fixed (column 0
    first), so inserting zero activations cannot perturb the result.
    """
    single = x_hat.ndim == 1
    xb = x_hat[None, :] if single else x_hat
    acc = np.repeat(bias[None, :], xb.shape[0], axis=0)
    for j in range(weight.shape[1]):
        acc += xb[:, j, None] * weight[None, :, j]
    return acc[0] if single else acc


def forward(net: Network, x: np.ndarray, mask=None) -> np.ndarray:
    """Exact execution of the network on x ((d,) or (B, d)).

    mask: optional per-hidden-layer sets of neuron indices forced to
    zero after ReLU (the zero-padding execution semantics).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != net.input_dim:
        raise DimensionError(
            f"input has {x.shape[-1]} coordinates, network expects {net.input_dim}"
        )
    h = x
    for k, layer in enumerate(net.layers):
        z = affine(layer.weight, layer.bias, h)
        if layer.activation is Activation.RELU:
            h = np.maximum(z, 0.0)
            if mask is not None and mask.get(k):
                idx = sorted(mask[k])
                if h.ndim == 1:
                    h[idx] = 0.0
                else:
                    h[:, idx] = 0.0
        else:
            h = z
    return h


def _layer_from_dict(obj, k: int) -> Layer:
    if not isinstance(obj, dict):
        raise ParseError(f"layer {k}: expected an object")
    for key in ("weight", "bias", "activation"):
        if key not in obj:
            raise ParseError(f"layer {k}: missing '{key}'")
    try:
        weight = np.array(obj["weight"], dtype=np.float64)
        bias = np.array(obj["bias"], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"layer {k}: malformed weight/bias") from exc
    try:
        act = Activation(obj["activation"])
    except ValueError as exc:
        raise ParseError(f"layer {k}: unknown activation {obj['activation']!r}") from exc
    if weight.ndim != 2:
        raise ShapeError(f"layer {k}: weight is not a matrix")
    return Layer(weight=weight, bias=bias, activation=act)


def network_from_dict(obj: dict) -> Network:
    if not isinstance(obj, dict) or "layers" not in obj or "input_dim" not in obj:
        raise ParseError("network file needs 'input_dim' and 'layers'")
    layers = [_layer_from_dict(l, k) for k, l in enumerate(obj["layers"])]
    net = Network(layers=tuple(layers))
    if net.input_dim != int(obj["input_dim"]):
        raise ShapeError(
            f"declared input_dim {obj['input_dim']} != layer 1 columns {net.input_dim}"
        )
    return net


def network_to_dict(net: Network) -> dict:
    return {
        "input_dim": net.input_dim,
        "layers": [
            {
                "weight": layer.weight.tolist(),
                "bias": layer.bias.tolist(),
                "activation": layer.activation.value,
            }
            for layer in net.layers
        ],
    }


def load_network(path) -> Network:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return network_from_dict(obj)


def save_network(net: Network, path) -> None:
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh)


def load_region(path) -> InputRegion:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if "lower" not in obj or "upper" not in obj:
        raise ParseError("region file needs 'lower' and 'upper'")
    return InputRegion(
        lower=np.array(obj["lower"], dtype=np.float64),
        upper=np.array(obj["upper"], dtype=np.float64),
    )
