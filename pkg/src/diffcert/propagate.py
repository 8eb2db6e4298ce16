"""Dual-network symbolic propagation.

Tracks, layer by layer, linear-in-input bounds on the original
network's pre/post-activations (A, b coefficients) and on the
accumulated difference against the compressed network (C, d
coefficients), concretizing through the input box where the ReLU
relaxations need numeric intervals.

All coefficient compositions use positive/negative splitting: a lower
bound is composed from lower coefficients through positive multipliers
and upper coefficients through negative ones. The diagonal relaxation
slopes are nonnegative, so the ReLU step composes without splitting.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .compress import AlignedPair
from .errors import RelaxationError, ShapeError
from .networks import InputRegion
from .relaxation import relax_activation, relax_error


@dataclass(frozen=True)
class SymbolicState:
    k: int  # 0-based layer index the pre-activation coefficients refer to
    # pre-activation bounds of layer k as functions of the network input
    Al: np.ndarray
    Au: np.ndarray
    bl: np.ndarray
    bu: np.ndarray
    Cl: np.ndarray
    Cu: np.ndarray
    dl: np.ndarray
    du: np.ndarray
    # post-activation coefficients (set by propagate_relu)
    Al_hat: np.ndarray | None = None
    Au_hat: np.ndarray | None = None
    bl_hat: np.ndarray | None = None
    bu_hat: np.ndarray | None = None
    Cl_hat: np.ndarray | None = None
    Cu_hat: np.ndarray | None = None
    dl_hat: np.ndarray | None = None
    du_hat: np.ndarray | None = None
    # concrete intervals (set by concretize)
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    err_lower: np.ndarray | None = None
    err_upper: np.ndarray | None = None


@dataclass(frozen=True)
class ErrorEnvelope:
    """Output-layer linear error bounds:
    C_low x + d_low <= f(x) - f'(x) <= C_up x + d_up on the region."""

    C_low: np.ndarray  # (n_out, d_in)
    C_up: np.ndarray
    d_low: np.ndarray  # (n_out,)
    d_up: np.ndarray
    delta_lo: np.ndarray  # concretized interval per output
    delta_hi: np.ndarray

    def select(self, output_index: int) -> "ErrorEnvelope":
        i = output_index
        return ErrorEnvelope(
            C_low=self.C_low[i : i + 1],
            C_up=self.C_up[i : i + 1],
            d_low=self.d_low[i : i + 1],
            d_up=self.d_up[i : i + 1],
            delta_lo=self.delta_lo[i : i + 1],
            delta_hi=self.delta_hi[i : i + 1],
        )

    @property
    def n_out(self) -> int:
        return self.C_low.shape[0]


def _pos(m: np.ndarray) -> np.ndarray:
    return np.maximum(m, 0.0)


def _neg(m: np.ndarray) -> np.ndarray:
    return np.minimum(m, 0.0)


def init_state(pair: AlignedPair) -> SymbolicState:
    """Exact layer-1 coefficients: the affine maps themselves."""
    w = pair.original.layers[0].weight
    b = pair.original.layers[0].bias
    return SymbolicState(
        k=0,
        Al=w, Au=w, bl=b, bu=b,
        Cl=pair.weight_delta[0], Cu=pair.weight_delta[0],
        dl=pair.bias_delta[0], du=pair.bias_delta[0],
    )


def propagate_linear(state: SymbolicState, pair: AlignedPair, k: int) -> SymbolicState:
    """Compose the post-activation coefficients of layer k-1 with the
    affine maps of layer k (0-based)."""
    if state.Al_hat is None:
        raise ShapeError("propagate_linear needs post-activation coefficients")
    w = pair.original.layers[k].weight
    b = pair.original.layers[k].bias
    wp = pair.compressed.layers[k].weight
    wd = pair.weight_delta[k]
    bd = pair.bias_delta[k]
    if w.shape[1] != state.Al_hat.shape[0]:
        raise ShapeError(
            f"layer {k}: weight columns {w.shape[1]} != state width "
            f"{state.Al_hat.shape[0]}"
        )
    w_p, w_n = _pos(w), _neg(w)
    wd_p, wd_n = _pos(wd), _neg(wd)
    wp_p, wp_n = _pos(wp), _neg(wp)
    return SymbolicState(
        k=k,
        Al=w_p @ state.Al_hat + w_n @ state.Au_hat,
        Au=w_p @ state.Au_hat + w_n @ state.Al_hat,
        bl=w_p @ state.bl_hat + w_n @ state.bu_hat + b,
        bu=w_p @ state.bu_hat + w_n @ state.bl_hat + b,
        Cl=wd_p @ state.Al_hat + wd_n @ state.Au_hat
        + wp_p @ state.Cl_hat + wp_n @ state.Cu_hat,
        Cu=wd_p @ state.Au_hat + wd_n @ state.Al_hat
        + wp_p @ state.Cu_hat + wp_n @ state.Cl_hat,
        dl=wd_p @ state.bl_hat + wd_n @ state.bu_hat
        + wp_p @ state.dl_hat + wp_n @ state.du_hat + bd,
        du=wd_p @ state.bu_hat + wd_n @ state.bl_hat
        + wp_p @ state.du_hat + wp_n @ state.dl_hat + bd,
    )


def concretize(state: SymbolicState, region: InputRegion) -> SymbolicState:
    """Fill numeric pre-activation and error intervals over the box."""
    lo, hi = region.lower, region.upper
    l = _pos(state.Al) @ lo + _neg(state.Al) @ hi + state.bl
    u = _pos(state.Au) @ hi + _neg(state.Au) @ lo + state.bu
    dll = _pos(state.Cl) @ lo + _neg(state.Cl) @ hi + state.dl
    dlh = _pos(state.Cl) @ hi + _neg(state.Cl) @ lo + state.dl
    dul = _pos(state.Cu) @ lo + _neg(state.Cu) @ hi + state.du
    duh = _pos(state.Cu) @ hi + _neg(state.Cu) @ lo + state.du
    return replace(
        state,
        lower=l,
        upper=u,
        err_lower=np.minimum(dll, dul),
        err_upper=np.maximum(dlh, duh),
    )


def propagate_relu(state: SymbolicState, pair: AlignedPair, k: int) -> SymbolicState:
    """Apply the per-neuron ReLU relaxations to both channels.

    Pruned neurons follow the zero-padding rule: the compressed
    activation is zero, so the post-ReLU error equals ReLU(x) and its
    coefficients come from the activation relaxation applied to the
    original channel.
    """
    if state.lower is None:
        raise ShapeError("propagate_relu needs concretized intervals")
    n = state.lower.shape[0]
    pruned = pair.prune_spec.at(k)
    ml = np.empty(n)
    mu = np.empty(n)
    pl = np.empty(n)
    pu = np.empty(n)
    Cl_hat = np.empty_like(state.Cl)
    Cu_hat = np.empty_like(state.Cu)
    dl_hat = np.empty(n)
    du_hat = np.empty(n)
    for i in range(n):
        a = relax_activation(state.lower[i], state.upper[i])
        ml[i], mu[i], pl[i], pu[i] = a
        if i in pruned:
            # error channel mirrors the activation relaxation of x_k,i
            Cl_hat[i] = a.m_l * state.Al[i]
            Cu_hat[i] = a.m_u * state.Au[i]
            dl_hat[i] = a.m_l * state.bl[i] + a.p_l
            du_hat[i] = a.m_u * state.bu[i] + a.p_u
        else:
            e = relax_error(
                state.lower[i], state.upper[i],
                state.err_lower[i], state.err_upper[i],
            )
            if min(e.n_l, e.n_u) < 0.0:
                raise RelaxationError(f"negative error slope at neuron {i}")
            Cl_hat[i] = e.n_l * state.Cl[i]
            Cu_hat[i] = e.n_u * state.Cu[i]
            dl_hat[i] = e.n_l * state.dl[i] + e.q_l
            du_hat[i] = e.n_u * state.du[i] + e.q_u
    if min(ml.min(), mu.min()) < 0.0:
        raise RelaxationError("negative activation slope")
    return replace(
        state,
        Al_hat=ml[:, None] * state.Al,
        Au_hat=mu[:, None] * state.Au,
        bl_hat=ml * state.bl + pl,
        bu_hat=mu * state.bu + pu,
        Cl_hat=Cl_hat,
        Cu_hat=Cu_hat,
        dl_hat=dl_hat,
        du_hat=du_hat,
    )


def compute_envelope(
    pair: AlignedPair, region: InputRegion, output_index: int | None = None
) -> ErrorEnvelope:
    """Full pipeline: init, then (concretize, relu, linear) per hidden
    layer, final concretize at the output layer."""
    if region.dim != pair.input_dim:
        raise ShapeError(
            f"region dimension {region.dim} != network input {pair.input_dim}"
        )
    state = init_state(pair)
    num_layers = pair.num_layers
    for k in range(num_layers - 1):
        state = concretize(state, region)
        state = propagate_relu(state, pair, k)
        state = propagate_linear(state, pair, k + 1)
    state = concretize(state, region)
    env = ErrorEnvelope(
        C_low=state.Cl,
        C_up=state.Cu,
        d_low=state.dl,
        d_up=state.du,
        delta_lo=state.err_lower,
        delta_hi=state.err_upper,
    )
    if output_index is not None:
        env = env.select(output_index)
    return env
