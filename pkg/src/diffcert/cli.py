"""Command-line frontend.

Exit codes: 0 certified / success, 1 not certified or infeasible,
2 usage error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bounds import Method
from .certify import (
    CertificationQuery,
    certified_radius,
    certify_probability,
    compare_methods,
    worst_case_radius,
)
from .compress import PruneSpec, align, prune, quantize, remove_pruned
from .errors import DiffcertError, InfeasibleAtCenter, ParseError
from .networks import load_network, load_region, network_to_dict, save_network
from .oracle import mc_probability

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


def _parse_output_index(value: str):
    if value == "all":
        return None
    return int(value)


def _add_pair_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--original", required=True, help="original network JSON")
    p.add_argument("--compressed", required=True, help="compressed network JSON")
    p.add_argument("--prune-spec", help="prune spec JSON (omit for quantized pairs)")


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--method", choices=["hoeffding", "bernstein"], default="bernstein")
    p.add_argument("--output-index", type=_parse_output_index, default=0,
                   help="output coordinate, or 'all' for the minimum across outputs")
    p.add_argument("--max-partitions", type=int, default=1)
    p.add_argument("--threads", type=int, default=1, help="0 = auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON report here (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffcert")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a network file")
    p.add_argument("--in", dest="path", required=True)

    p = sub.add_parser("quantize", help="symmetric weight quantization")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("prune", help="magnitude pruning of hidden neurons")
    p.add_argument("--in", dest="path", required=True)
    p.add_argument("--ratio", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--spec-out", required=True)
    p.add_argument("--removed-out", help="also export the physically removed variant")

    p = sub.add_parser("align", help="check and build the aligned pair")
    _add_pair_args(p)
    p.add_argument("--out", help="write alignment summary JSON")

    p = sub.add_parser("certify-prob", help="probability interval over a region")
    _add_pair_args(p)
    p.add_argument("--region", required=True, help="region JSON {lower, upper}")
    p.add_argument("--gamma", type=float, help="optional pass/fail threshold")
    _add_common_args(p)

    p = sub.add_parser("certify-radius", help="maximal certified radius")
    _add_pair_args(p)
    p.add_argument("--center", required=True, help="center JSON")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--radius-tol", type=float, default=1e-3)
    _add_common_args(p)

    p = sub.add_parser("worst-case-radius", help="deterministic radius baseline")
    _add_pair_args(p)
    p.add_argument("--center", required=True)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--radius-tol", type=float, default=1e-3)
    _add_common_args(p)

    p = sub.add_parser("compare", help="run both inequalities side by side")
    _add_pair_args(p)
    p.add_argument("--region")
    p.add_argument("--center")
    p.add_argument("--gamma", type=float)
    p.add_argument("--r-max", type=float, default=1.0)
    p.add_argument("--radius-tol", type=float, default=1e-3)
    _add_common_args(p)

    p = sub.add_parser("sample", help="Monte-Carlo probability estimate")
    _add_pair_args(p)
    p.add_argument("--region", required=True)
    p.add_argument("-n", "--samples", type=int, default=100000)
    _add_common_args(p)

    return ap


def _load_pair(args):
    original = load_network(args.original)
    compressed = load_network(args.compressed)
    spec = PruneSpec.load(args.prune_spec) if args.prune_spec else None
    return align(original, compressed, spec)


def _load_center(path):
    with open(path) as fh:
        obj = json.load(fh)
    if "center" not in obj:
        raise ParseError("center file needs a 'center' vector")
    center = np.array(obj["center"], dtype=np.float64)
    clip_lo = np.array(obj["clip_lower"], dtype=np.float64) if "clip_lower" in obj else None
    clip_hi = np.array(obj["clip_upper"], dtype=np.float64) if "clip_upper" in obj else None
    return center, clip_lo, clip_hi


def _emit(args, payload: dict) -> None:
    payload = {
        "tool": {"name": "diffcert", "version": __version__},
        "config": {
            k: v for k, v in vars(args).items()
            if k != "command" and not callable(v)
        },
        "command": args.command,
        **payload,
    }
    text = json.dumps(payload, indent=2, default=str)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _threads(args) -> int:
    import os

    n = getattr(args, "threads", 1)
    return os.cpu_count() or 1 if n == 0 else max(1, n)


def _run(args) -> int:
    if args.command == "validate":
        net = load_network(args.path)
        print(json.dumps({
            "valid": True,
            "input_dim": net.input_dim,
            "output_dim": net.output_dim,
            "layers": net.num_layers,
        }))
        return EXIT_OK

    if args.command == "quantize":
        net = load_network(args.path)
        save_network(quantize(net, args.bits), args.out)
        return EXIT_OK

    if args.command == "prune":
        net = load_network(args.path)
        pruned, spec = prune(net, args.ratio)
        save_network(pruned, args.out)
        with open(args.spec_out, "w") as fh:
            json.dump(spec.to_json(), fh)
        if args.removed_out:
            save_network(remove_pruned(pruned, spec), args.removed_out)
        return EXIT_OK

    if args.command == "align":
        pair = _load_pair(args)
        summary = {
            "aligned": True,
            "prune_spec": pair.prune_spec.to_json(),
            "max_weight_delta": max(
                float(np.max(np.abs(d))) for d in pair.weight_delta
            ),
            "compressed": network_to_dict(pair.compressed),
        }
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(summary, fh, indent=2)
        else:
            print(json.dumps({k: v for k, v in summary.items() if k != "compressed"}))
        return EXIT_OK

    if args.command == "sample":
        pair = _load_pair(args)
        region = load_region(args.region)
        est = mc_probability(
            pair, region, args.eps, args.samples, args.seed,
            output_index=args.output_index, workers=_threads(args),
        )
        _emit(args, {"estimate": est.to_json()})
        return EXIT_OK

    method = Method(args.method)

    if args.command == "certify-prob":
        pair = _load_pair(args)
        q = CertificationQuery(
            pair=pair, epsilon=args.eps, method=method,
            output_index=args.output_index, region=load_region(args.region),
            max_partitions=args.max_partitions,
        )
        rep = certify_probability(q, threads=_threads(args))
        _emit(args, {"report": rep.to_json()})
        if args.gamma is not None and rep.interval.gamma_min < args.gamma:
            return EXIT_NOT_CERTIFIED
        return EXIT_OK

    if args.command in ("certify-radius", "worst-case-radius"):
        pair = _load_pair(args)
        center, clip_lo, clip_hi = _load_center(args.center)
        q = CertificationQuery(
            pair=pair, epsilon=args.eps, method=method,
            output_index=args.output_index, center=center,
            gamma=getattr(args, "gamma", None), r_max=args.r_max,
            tolerance=args.radius_tol, max_partitions=args.max_partitions,
            clip_lower=clip_lo, clip_upper=clip_hi,
        )
        rep = (certified_radius if args.command == "certify-radius"
               else worst_case_radius)(q)
        _emit(args, {"report": rep.to_json()})
        return EXIT_OK if rep.radius > 0.0 else EXIT_NOT_CERTIFIED

    if args.command == "compare":
        if (args.region is None) == (args.center is None):
            raise SystemExit2("compare needs exactly one of --region / --center")
        pair = _load_pair(args)
        if args.region:
            q = CertificationQuery(
                pair=pair, epsilon=args.eps, method=method,
                output_index=args.output_index, region=load_region(args.region),
                max_partitions=args.max_partitions,
            )
        else:
            center, clip_lo, clip_hi = _load_center(args.center)
            if args.gamma is None:
                raise SystemExit2("compare in radius mode needs --gamma")
            q = CertificationQuery(
                pair=pair, epsilon=args.eps, method=method,
                output_index=args.output_index, center=center, gamma=args.gamma,
                r_max=args.r_max, tolerance=args.radius_tol,
                max_partitions=args.max_partitions,
                clip_lower=clip_lo, clip_upper=clip_hi,
            )
        reports = compare_methods(q)
        _emit(args, {"reports": {k: r.to_json() for k, r in reports.items()}})
        return EXIT_OK

    raise SystemExit2(f"unknown command {args.command}")


class SystemExit2(Exception):
    """Usage error surfaced with exit code 2."""


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage, 0 on --help
        return int(exc.code or 0)
    try:
        return _run(args)
    except SystemExit2 as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleAtCenter as exc:
        print(f"not certifiable: {exc}", file=sys.stderr)
        return EXIT_NOT_CERTIFIED
    except (DiffcertError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
