"""Quantization, magnitude pruning, and zero-padding alignment.

Alignment restores structural equality between an original network and
a pruned one: at every pruned layer the compressed side keeps the
original weights and biases (so the weight deltas vanish there) and the
pruned activations are forced to zero during execution and propagation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import AlignmentError
from .networks import Activation, Layer, Network, forward


@dataclass(frozen=True)
class PruneSpec:
    """Pruned hidden-neuron indices per layer, keyed by 0-based layer index."""

    pruned: dict[int, frozenset[int]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {
            int(k): frozenset(int(i) for i in v)
            for k, v in self.pruned.items()
            if len(v) > 0
        }
        object.__setattr__(self, "pruned", clean)

    @property
    def empty(self) -> bool:
        return not self.pruned

    def at(self, k: int) -> frozenset[int]:
        return self.pruned.get(k, frozenset())

    def validate(self, net: Network) -> None:
        for k, idx in self.pruned.items():
            if k < 0 or k >= net.num_layers - 1:
                raise AlignmentError(f"prune layer {k} is not a hidden layer")
            width = net.layers[k].n_out
            if any(i < 0 or i >= width for i in idx):
                raise AlignmentError(f"prune index out of range at layer {k}")

    def to_json(self) -> dict:
        return {"pruned": {str(k): sorted(v) for k, v in self.pruned.items()}}

    @classmethod
    def from_json(cls, obj: dict) -> "PruneSpec":
        return cls(pruned={int(k): frozenset(v) for k, v in obj.get("pruned", {}).items()})

    @classmethod
    def load(cls, path) -> "PruneSpec":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class AlignedPair:
    original: Network
    compressed: Network
    prune_spec: PruneSpec
    weight_delta: tuple[np.ndarray, ...]
    bias_delta: tuple[np.ndarray, ...]

    @property
    def num_layers(self) -> int:
        return self.original.num_layers

    @property
    def input_dim(self) -> int:
        return self.original.input_dim


def quantize(net: Network, bits: int) -> Network:
    """Per-tensor symmetric quantize-dequantize of every weight matrix.

    Step size is max|w| / (2^(bits-1) - 1); rounding is numpy's
    round-half-to-even. Biases are left untouched.
    """
    if not 2 <= bits <= 16:
        raise ValueError(f"bits must be in [2, 16], got {bits}")
    levels = 2 ** (bits - 1) - 1
    layers = []
    for layer in net.layers:
        scale = np.max(np.abs(layer.weight)) / levels
        if scale == 0.0:
            w = layer.weight
        else:
            w = np.round(layer.weight / scale) * scale
        layers.append(Layer(weight=w, bias=layer.bias, activation=layer.activation))
    return Network(layers=tuple(layers))


def prune(net: Network, ratio: float) -> tuple[Network, PruneSpec]:
    """Magnitude pruning: per hidden layer, zero the floor(ratio * n_k)
    neurons with the smallest L1 norm of their incoming weight row
    (ties to the lowest index). Rows and biases are zeroed; shape kept.
    """
    if not 0.0 <= ratio < 1.0:
        raise ValueError(f"ratio must be in [0, 1), got {ratio}")
    layers = []
    pruned: dict[int, frozenset[int]] = {}
    for k, layer in enumerate(net.layers):
        if k == net.num_layers - 1:
            layers.append(layer)
            continue
        count = int(ratio * layer.n_out)
        if count == 0:
            layers.append(layer)
            continue
        norms = np.abs(layer.weight).sum(axis=1)
        order = np.lexsort((np.arange(layer.n_out), norms))
        idx = frozenset(int(i) for i in order[:count])
        w = layer.weight.copy()
        b = layer.bias.copy()
        rows = sorted(idx)
        w[rows, :] = 0.0
        b[rows] = 0.0
        pruned[k] = idx
        layers.append(Layer(weight=w, bias=b, activation=layer.activation))
    return Network(layers=tuple(layers)), PruneSpec(pruned=pruned)


def remove_pruned(net: Network, spec: PruneSpec) -> Network:
    """Physically remove pruned neurons: drop their rows and the
    matching columns of the next layer. Export-only variant; the
    engine always works on the shape-preserving form.
    """
    spec.validate(net)
    layers = []
    for k, layer in enumerate(net.layers):
        w, b = layer.weight, layer.bias
        drop_cols = sorted(spec.at(k - 1))
        if drop_cols:
            w = np.delete(w, drop_cols, axis=1)
        drop_rows = sorted(spec.at(k))
        if drop_rows:
            w = np.delete(w, drop_rows, axis=0)
            b = np.delete(b, drop_rows)
        layers.append(Layer(weight=w, bias=b, activation=layer.activation))
    return Network(layers=tuple(layers))


def _check_derives(f: Network, f_pruned: Network, spec: PruneSpec) -> None:
    for k in range(f.num_layers):
        w, b = f.layers[k].weight, f.layers[k].bias
        wp, bp = f_pruned.layers[k].weight, f_pruned.layers[k].bias
        if w.shape != wp.shape:
            raise AlignmentError(f"layer {k}: shape mismatch {w.shape} vs {wp.shape}")
        rows = sorted(spec.at(k))
        keep_r = np.ones(w.shape[0], dtype=bool)
        keep_r[rows] = False
        # columns feeding from pruned neurons carry zero activations, so
        # their values are irrelevant and left unconstrained
        keep_c = np.ones(w.shape[1], dtype=bool)
        keep_c[sorted(spec.at(k - 1))] = False
        if rows and (np.any(wp[rows, :][:, keep_c] != 0.0) or np.any(bp[rows] != 0.0)):
            raise AlignmentError(f"layer {k}: pruned rows are not zeroed")
        if np.any(w[np.ix_(keep_r, keep_c)] != wp[np.ix_(keep_r, keep_c)]) or np.any(
            b[keep_r] != bp[keep_r]
        ):
            raise AlignmentError(
                f"layer {k}: kept weights differ from the original network"
            )


def _reinflate(f: Network, f_removed: Network, spec: PruneSpec) -> Network:
    """Re-insert zero rows/columns for physically removed neurons."""
    layers = []
    for k, layer in enumerate(f_removed.layers):
        w, b = layer.weight, layer.bias
        for j in sorted(spec.at(k - 1)):
            if j > w.shape[1]:
                raise AlignmentError(f"layer {k}: cannot reinsert column {j}")
            w = np.insert(w, j, 0.0, axis=1)
        for i in sorted(spec.at(k)):
            if i > w.shape[0]:
                raise AlignmentError(f"layer {k}: cannot reinsert row {i}")
            w = np.insert(w, i, 0.0, axis=0)
            b = np.insert(b, i, 0.0)
        layers.append(Layer(weight=w, bias=b, activation=layer.activation))
    net = Network(layers=tuple(layers))
    if net.widths() != f.widths():
        raise AlignmentError("pruned network widths inconsistent with spec")
    return net


def align(f: Network, f_compressed: Network, spec: PruneSpec | None = None) -> AlignedPair:
    """Build the structurally aligned pair.

    With an empty spec (quantization or self pair) the deltas are plain
    elementwise differences. With pruning, the compressed side reuses
    the original weights at every layer touched by the spec, so the
    deltas there are exactly zero and the whole compression effect is
    carried by the forced-zero activations.
    """
    spec = spec or PruneSpec()
    spec.validate(f)
    if f.input_dim != f_compressed.input_dim:
        raise AlignmentError("networks have different input dimensions")
    if f.widths() != f_compressed.widths():
        if spec.empty:
            raise AlignmentError("networks have different shapes; prune spec required")
        expected = [
            f.widths()[k] - len(spec.at(k)) for k in range(f.num_layers)
        ]
        if f_compressed.widths() != expected:
            raise AlignmentError(
                f"pruned widths {f_compressed.widths()} match neither the "
                f"original {f.widths()} nor the removed form {expected}"
            )
        f_compressed = _reinflate(f, f_compressed, spec)
    if not spec.empty:
        _check_derives(f, f_compressed, spec)
        layers = []
        for k, layer in enumerate(f.layers):
            if spec.at(k) or spec.at(k - 1):
                layers.append(layer)
            else:
                layers.append(f_compressed.layers[k])
        compressed = Network(layers=tuple(layers))
    else:
        compressed = f_compressed
    wd, bd = [], []
    for k in range(f.num_layers):
        dw = f.layers[k].weight - compressed.layers[k].weight
        db = f.layers[k].bias - compressed.layers[k].bias
        dw.setflags(write=False)
        db.setflags(write=False)
        wd.append(dw)
        bd.append(db)
    return AlignedPair(
        original=f,
        compressed=compressed,
        prune_spec=spec,
        weight_delta=tuple(wd),
        bias_delta=tuple(bd),
    )


def forward_compressed(pair: AlignedPair, x: np.ndarray) -> np.ndarray:
    """Execute the aligned compressed network: the compressed weights
    with pruned activations forced to zero after each ReLU."""
    mask = {k: set(v) for k, v in pair.prune_spec.pruned.items()}
    return forward(pair.compressed, x, mask=mask or None)


def output_difference(pair: AlignedPair, x: np.ndarray) -> np.ndarray:
    """f(x) - f'(x) under the aligned execution semantics."""
    return forward(pair.original, x) - forward_compressed(pair, x)
