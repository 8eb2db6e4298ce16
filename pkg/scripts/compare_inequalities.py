#!/usr/bin/env python3
"""Small experiment: generate random quantized/pruned pairs and compare
the two concentration inequalities under identical partition budgets.

Prints, per pair, the certified probability interval of each method and
the width-reduction metric, plus a seeded Monte-Carlo reference.

Usage:
    python3 scripts/compare_inequalities.py [--pairs N] [--eps E]
        [--partitions P] [--seed S]
"""

import argparse

import numpy as np

from diffcert.bounds import Method
from diffcert.certify import CertificationQuery, compare_methods
from diffcert.compress import align, prune, quantize
from diffcert.networks import Activation, InputRegion, Layer, Network
from diffcert.oracle import mc_probability


def random_net(rng, widths):
    layers = []
    for k in range(1, len(widths)):
        act = Activation.RELU if k < len(widths) - 1 else Activation.IDENTITY
        layers.append(Layer(
            weight=rng.normal(0, 1 / np.sqrt(widths[k - 1]),
                              size=(widths[k], widths[k - 1])),
            bias=rng.normal(0, 0.1, size=widths[k]),
            activation=act,
        ))
    return Network(layers=tuple(layers))


def random_pair(rng):
    widths = [int(rng.integers(1, 5)),
              int(rng.integers(4, 24)),
              int(rng.integers(4, 24)), 1]
    net = random_net(rng, widths)
    if rng.integers(2) == 0:
        return "quantized", align(net, quantize(net, int(rng.choice([4, 8]))))
    pruned, spec = prune(net, float(rng.choice([0.1, 0.25])))
    return "pruned", align(net, pruned, spec)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=5)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--partitions", type=int, default=16)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    for i in range(args.pairs):
        kind, pair = random_pair(rng)
        dim = pair.input_dim
        region = InputRegion(lower=-0.5 * np.ones(dim),
                             upper=0.5 * np.ones(dim))
        q = CertificationQuery(
            pair=pair, epsilon=args.eps, method=Method.BERNSTEIN,
            output_index=0, region=region, max_partitions=args.partitions,
        )
        reports = compare_methods(q)
        est = mc_probability(pair, region, args.eps, 50_000,
                             seed=args.seed + i, output_index=0)
        print(f"pair {i} ({kind}, dim={dim}):")
        for name, rep in reports.items():
            iv = rep.interval
            print(f"  {name:9s} gamma in [{iv.gamma_min:.4f}, "
                  f"{iv.gamma_max:.4f}]  width_reduction="
                  f"{rep.width_reduction:.4f}")
        print(f"  monte-carlo p_hat={est.p_hat:.4f} "
              f"ci=[{est.ci_low:.4f}, {est.ci_high:.4f}]")


if __name__ == "__main__":
    main()
