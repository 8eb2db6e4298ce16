"""Probabilistic similarity certification for compressed ReLU networks."""

__version__ = "0.1.0"

from .bounds import (
    CdfBounds,
    LinearMoments,
    Method,
    ProbabilityInterval,
    bernstein_bounds,
    combine,
    hoeffding_bounds,
    interval_for,
    moments,
    tightness_holds,
)
from .certify import (
    CertificationQuery,
    CertificationReport,
    certified_radius,
    certify_probability,
    compare_methods,
    worst_case_radius,
)
from .compress import (
    AlignedPair,
    PruneSpec,
    align,
    forward_compressed,
    output_difference,
    prune,
    quantize,
    remove_pruned,
)
from .networks import (
    Activation,
    InputRegion,
    Layer,
    Network,
    forward,
    load_network,
    load_region,
    save_network,
)
from .oracle import EmpiricalEstimate, grid_envelope_check, mc_probability
from .propagate import ErrorEnvelope, SymbolicState, compute_envelope
from .relaxation import relax_activation, relax_error

__all__ = [
    "Activation",
    "AlignedPair",
    "CdfBounds",
    "CertificationQuery",
    "CertificationReport",
    "EmpiricalEstimate",
    "ErrorEnvelope",
    "InputRegion",
    "Layer",
    "LinearMoments",
    "Method",
    "Network",
    "ProbabilityInterval",
    "PruneSpec",
    "SymbolicState",
    "align",
    "bernstein_bounds",
    "certified_radius",
    "certify_probability",
    "combine",
    "compare_methods",
    "compute_envelope",
    "forward",
    "forward_compressed",
    "grid_envelope_check",
    "hoeffding_bounds",
    "interval_for",
    "load_network",
    "load_region",
    "mc_probability",
    "moments",
    "output_difference",
    "prune",
    "quantize",
    "relax_activation",
    "relax_error",
    "remove_pruned",
    "save_network",
    "tightness_holds",
    "worst_case_radius",
]
