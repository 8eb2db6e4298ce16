"""Quantization, pruning, and zero-padding alignment."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diffcert.compress import (
    PruneSpec,
    align,
    forward_compressed,
    output_difference,
    prune,
    quantize,
    remove_pruned,
)
from diffcert.errors import AlignmentError
from diffcert.networks import Activation, Layer, Network, forward
from conftest import rand_net, rand_widths


def one_hidden(weight1, bias1, weight2, bias2):
    return Network(layers=(
        Layer(weight=np.asarray(weight1, dtype=float),
              bias=np.asarray(bias1, dtype=float), activation=Activation.RELU),
        Layer(weight=np.asarray(weight2, dtype=float),
              bias=np.asarray(bias2, dtype=float),
              activation=Activation.IDENTITY),
    ))


class TestQuantize:
    def test_two_bit_levels(self):
        # weights {-1, 0.5, 1}, 2 bits -> step 1.0; 0.5/1.0 rounds
        # half-to-even, i.e. to 0.0
        net = Network(layers=(
            Layer(weight=np.array([[-1.0, 0.5, 1.0]]), bias=np.zeros(1),
                  activation=Activation.IDENTITY),
        ))
        q = quantize(net, 2)
        assert np.array_equal(q.layers[0].weight, np.array([[-1.0, 0.0, 1.0]]))

    def test_sixteen_bit_error_bound(self):
        rng = np.random.default_rng(0)
        net = rand_net(rng, [3, 9, 2])
        q = quantize(net, 16)
        for a, b in zip(net.layers, q.layers):
            step = np.max(np.abs(a.weight)) / (2 ** 15 - 1)
            assert np.max(np.abs(a.weight - b.weight)) <= step / 2 + 1e-15

    def test_all_zero_matrix_unchanged(self):
        net = one_hidden(np.zeros((2, 2)), np.zeros(2), np.zeros((1, 2)), [0.0])
        q = quantize(net, 4)
        assert np.array_equal(q.layers[0].weight, np.zeros((2, 2)))

    def test_biases_untouched(self):
        rng = np.random.default_rng(1)
        net = rand_net(rng, [2, 5, 1])
        q = quantize(net, 4)
        for a, b in zip(net.layers, q.layers):
            assert np.array_equal(a.bias, b.bias)

    def test_bits_out_of_range(self):
        net = one_hidden(np.ones((2, 2)), np.zeros(2), np.ones((1, 2)), [0.0])
        with pytest.raises(ValueError):
            quantize(net, 1)
        with pytest.raises(ValueError):
            quantize(net, 17)

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10**6), bits=st.integers(2, 16))
    def test_step_size_error_bound(self, seed, bits):
        rng = np.random.default_rng(seed)
        net = rand_net(rng, rand_widths(rng, max_width=10))
        q = quantize(net, bits)
        for a, b in zip(net.layers, q.layers):
            step = np.max(np.abs(a.weight)) / (2 ** (bits - 1) - 1)
            assert np.max(np.abs(a.weight - b.weight)) <= step / 2 + 1e-12


class TestPrune:
    def test_zero_ratio_noop(self):
        rng = np.random.default_rng(2)
        net = rand_net(rng, [2, 6, 1])
        pruned, spec = prune(net, 0.0)
        assert spec.empty
        assert np.array_equal(pruned.layers[0].weight, net.layers[0].weight)

    def test_quarter_of_four(self):
        rng = np.random.default_rng(3)
        net = rand_net(rng, [2, 4, 1])
        _, spec = prune(net, 0.25)
        assert len(spec.at(0)) == 1

    def test_smallest_row_goes_first(self):
        net = one_hidden([[10.0, 10.0], [0.1, 0.1], [5.0, 5.0]], np.zeros(3),
                         np.ones((1, 3)), [0.0])
        _, spec = prune(net, 1 / 3)
        assert spec.at(0) == frozenset({1})

    def test_pruned_neuron_inert(self):
        rng = np.random.default_rng(4)
        net = rand_net(rng, [3, 6, 2])
        pruned, spec = prune(net, 0.5)
        (i, *_) = sorted(spec.at(0))
        assert np.all(pruned.layers[0].weight[i] == 0.0)
        assert pruned.layers[0].bias[i] == 0.0

    def test_output_layer_never_pruned(self):
        rng = np.random.default_rng(5)
        net = rand_net(rng, [2, 8, 3])
        _, spec = prune(net, 0.9)
        assert all(k < net.num_layers - 1 for k in spec.pruned)


class TestPruneSpec:
    def test_json_round_trip(self):
        spec = PruneSpec(pruned={0: frozenset({2, 5}), 1: frozenset({0})})
        again = PruneSpec.from_json(spec.to_json())
        assert again == spec

    def test_validate_rejects_output_layer(self):
        rng = np.random.default_rng(6)
        net = rand_net(rng, [2, 4, 1])
        with pytest.raises(AlignmentError):
            PruneSpec(pruned={1: frozenset({0})}).validate(net)

    def test_validate_rejects_out_of_range_index(self):
        rng = np.random.default_rng(7)
        net = rand_net(rng, [2, 4, 1])
        with pytest.raises(AlignmentError):
            PruneSpec(pruned={0: frozenset({4})}).validate(net)


class TestAlign:
    def test_self_pair_zero_deltas(self):
        rng = np.random.default_rng(8)
        net = rand_net(rng, [3, 5, 2])
        pair = align(net, net, None)
        assert all(np.all(d == 0.0) for d in pair.weight_delta)
        assert all(np.all(d == 0.0) for d in pair.bias_delta)

    def test_quantized_pair_deltas(self):
        rng = np.random.default_rng(9)
        net = rand_net(rng, [3, 5, 2])
        q = quantize(net, 4)
        pair = align(net, q, None)
        for k in range(net.num_layers):
            assert np.array_equal(
                pair.weight_delta[k],
                net.layers[k].weight - q.layers[k].weight,
            )

    def test_pruned_layers_have_zero_deltas(self):
        rng = np.random.default_rng(10)
        net = rand_net(rng, [3, 8, 8, 2])
        pruned, spec = prune(net, 0.25)
        pair = align(net, pruned, spec)
        for k in spec.pruned:
            assert np.all(pair.weight_delta[k] == 0.0)
            assert np.all(pair.bias_delta[k] == 0.0)
            assert np.all(pair.weight_delta[k + 1] == 0.0)

    def test_forward_equivalence_vs_zeroed(self):
        rng = np.random.default_rng(11)
        net = rand_net(rng, [2, 3, 1])
        pruned, spec = prune(net, 1 / 3)
        pair = align(net, pruned, spec)
        xs = rng.uniform(-2, 2, size=(100, 2))
        assert np.array_equal(forward_compressed(pair, xs), forward(pruned, xs))

    def test_shape_mismatch_without_spec(self):
        rng = np.random.default_rng(12)
        a = rand_net(rng, [2, 4, 1])
        b = rand_net(rng, [2, 3, 1])
        with pytest.raises(AlignmentError):
            align(a, b, None)

    def test_accepts_physically_removed_form(self):
        rng = np.random.default_rng(13)
        net = rand_net(rng, [3, 8, 4, 2])
        pruned, spec = prune(net, 0.25)
        removed = remove_pruned(pruned, spec)
        pair = align(net, removed, spec)
        xs = rng.uniform(-1, 1, size=(50, 3))
        assert np.array_equal(forward_compressed(pair, xs), forward(removed, xs))

    def test_rejects_unrelated_network(self):
        rng = np.random.default_rng(14)
        net = rand_net(rng, [2, 4, 1])
        _, spec = prune(net, 0.25)
        other = rand_net(rng, [2, 4, 1])
        with pytest.raises(AlignmentError):
            align(net, other, spec)


class TestZeroPaddingEquivalence:
    """Algorithm contract: aligned execution with forced zeros matches
    the physically pruned network bit for bit."""

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10**6))
    def test_bit_exact_vs_removed(self, seed):
        rng = np.random.default_rng(seed)
        net = rand_net(rng, rand_widths(rng))
        ratio = float(rng.choice([0.1, 0.25, 0.5]))
        pruned, spec = prune(net, ratio)
        removed = remove_pruned(pruned, spec)
        pair = align(net, pruned, spec)
        xs = rng.uniform(-2, 2, size=(200, net.input_dim))
        assert np.array_equal(forward_compressed(pair, xs), forward(removed, xs))

    def test_output_difference_consistency(self):
        rng = np.random.default_rng(15)
        net = rand_net(rng, [3, 10, 2])
        pruned, spec = prune(net, 0.25)
        pair = align(net, pruned, spec)
        xs = rng.uniform(-1, 1, size=(20, 3))
        diff = output_difference(pair, xs)
        assert np.array_equal(
            diff, forward(net, xs) - forward_compressed(pair, xs)
        )
