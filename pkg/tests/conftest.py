"""Shared fixtures: random network generation and the 1-D two-layer
fixture pair whose propagated error envelope over [-1, 1] is exactly

    lower: 0.09 x - 0.45        upper: 0.03 x + 0.40

which is the hand-checkable configuration used throughout the golden
tests (epsilon = 0.5 gives gamma_min 0.139 / 0.236 for the two
inequalities).
"""

import numpy as np
import pytest

from diffcert.compress import align, prune, quantize
from diffcert.networks import Activation, InputRegion, Layer, Network

_acceptance_lines = []


def record_acceptance(line):
    """Collect a "[ACCEPTANCE] ...: PASS|FAIL" verdict for the summary."""
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    # Verdicts are replayed here so they survive output capture.
    for line in _acceptance_lines:
        terminalreporter.write_line(line)


def rand_net(rng, widths, scale=1.0):
    """Random fully connected ReLU network with the given layer widths
    (first entry is the input dimension)."""
    layers = []
    for k in range(1, len(widths)):
        act = Activation.RELU if k < len(widths) - 1 else Activation.IDENTITY
        layers.append(
            Layer(
                weight=rng.normal(0.0, scale / np.sqrt(widths[k - 1]),
                                  size=(widths[k], widths[k - 1])),
                bias=rng.normal(0.0, 0.1, size=widths[k]),
                activation=act,
            )
        )
    return Network(layers=tuple(layers))


def rand_widths(rng, max_layers=4, max_width=32):
    d_in = int(rng.integers(1, 6))
    n_layers = int(rng.integers(2, max_layers + 1))
    hidden = [int(rng.integers(2, max_width + 1)) for _ in range(n_layers - 1)]
    return [d_in] + hidden + [int(rng.integers(1, 4))]


def rand_pair(rng, kind):
    """Random aligned pair of the given compression kind."""
    net = rand_net(rng, rand_widths(rng))
    if kind == "self":
        return align(net, net, None)
    if kind.startswith("quant"):
        bits = int(kind.split("-")[1])
        return align(net, quantize(net, bits), None)
    if kind.startswith("prune"):
        ratio = float(kind.split("-")[1])
        pruned, spec = prune(net, ratio)
        return align(net, pruned, spec)
    raise ValueError(kind)


def rand_region(rng, dim, max_width=2.0):
    center = rng.uniform(-1.0, 1.0, size=dim)
    half = rng.uniform(0.05, max_width / 2.0, size=dim)
    return InputRegion(lower=center - half, upper=center + half)


@pytest.fixture
def golden_original():
    return Network(layers=(
        Layer(weight=np.array([[1.0]]), bias=np.array([0.0]),
              activation=Activation.RELU),
        Layer(weight=np.array([[2.9725]]), bias=np.array([0.005]),
              activation=Activation.IDENTITY),
    ))


@pytest.fixture
def golden_compressed():
    return Network(layers=(
        Layer(weight=np.array([[0.8]]), bias=np.array([-9.8 / 267]),
              activation=Activation.RELU),
        Layer(weight=np.array([[3.3375]]), bias=np.array([0.0]),
              activation=Activation.IDENTITY),
    ))


@pytest.fixture
def golden_pair(golden_original, golden_compressed):
    return align(golden_original, golden_compressed, None)


@pytest.fixture
def golden_region():
    return InputRegion(lower=np.array([-1.0]), upper=np.array([1.0]))
