"""Per-neuron linear relaxations for the two propagation channels.

Activation channel: sound linear envelope of ReLU(x) over a concrete
pre-activation interval (adaptive lower slope, chord upper bound).

Error channel: sound linear-in-delta envelope of
g(x, delta) = ReLU(x) - ReLU(x - delta), built from the sandwich
min(0, delta) <= g <= max(0, delta) with exactness refinements when
both ReLU arguments have a fixed sign.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import IntervalError


class ActivationRelaxation(NamedTuple):
    m_l: float
    m_u: float
    p_l: float
    p_u: float


class ErrorRelaxation(NamedTuple):
    n_l: float
    n_u: float
    q_l: float
    q_u: float


def relax_activation(l: float, u: float) -> ActivationRelaxation:
    """Linear envelope m_l*x + p_l <= ReLU(x) <= m_u*x + p_u on [l, u]."""
    if l > u:
        raise IntervalError(f"l={l} > u={u}")
    if l >= 0.0:
        return ActivationRelaxation(1.0, 1.0, 0.0, 0.0)
    if u <= 0.0:
        return ActivationRelaxation(0.0, 0.0, 0.0, 0.0)
    # crossing: chord on top, adaptive 0/1 slope below
    slope = u / (u - l)
    intercept = -l * u / (u - l)
    lower = 1.0 if u >= -l else 0.0
    return ActivationRelaxation(lower, slope, 0.0, intercept)


def _upper_of_max0(d_lo: float, d_hi: float) -> tuple[float, float]:
    """Chord upper bound of max(0, d) on [d_lo, d_hi] (convex)."""
    if d_lo >= 0.0:
        return 1.0, 0.0
    if d_hi <= 0.0:
        return 0.0, 0.0
    slope = d_hi / (d_hi - d_lo)
    return slope, -d_lo * d_hi / (d_hi - d_lo)


def _lower_of_min0(d_lo: float, d_hi: float) -> tuple[float, float]:
    """Chord lower bound of min(0, d) on [d_lo, d_hi] (concave)."""
    if d_lo >= 0.0:
        return 0.0, 0.0
    if d_hi <= 0.0:
        return 1.0, 0.0
    slope = -d_lo / (d_hi - d_lo)
    return slope, -slope * d_hi


def relax_error(
    x_lo: float, x_hi: float, d_lo: float, d_hi: float
) -> ErrorRelaxation:
    """Envelope n_l*d + q_l <= ReLU(x) - ReLU(x - d) <= n_u*d + q_u over
    the box [x_lo, x_hi] x [d_lo, d_hi]."""
    if x_lo > x_hi:
        raise IntervalError(f"x_lo={x_lo} > x_hi={x_hi}")
    if d_lo > d_hi:
        raise IntervalError(f"d_lo={d_lo} > d_hi={d_hi}")
    if d_lo == 0.0 and d_hi == 0.0:
        return ErrorRelaxation(0.0, 0.0, 0.0, 0.0)
    # both ReLUs inactive: x <= 0 and x - d <= x_hi - d_lo <= 0
    if x_hi <= 0.0 and x_hi - d_lo <= 0.0:
        return ErrorRelaxation(0.0, 0.0, 0.0, 0.0)
    # both ReLUs active: x >= 0 and x - d >= x_lo - d_hi >= 0, so g = d
    if x_lo >= 0.0 and x_lo - d_hi >= 0.0:
        return ErrorRelaxation(1.0, 1.0, 0.0, 0.0)
    n_u, q_u = _upper_of_max0(d_lo, d_hi)
    n_l, q_l = _lower_of_min0(d_lo, d_hi)
    return ErrorRelaxation(n_l, n_u, q_l, q_u)
