"""Concentration-inequality probability bounds on the linear error
envelope under independent uniform inputs over a box.

For a linear function delta(X) = C.X + d with X_i ~ U(l_i, u_i):
    mean     = sum_i C_i (l_i+u_i)/2 + d
    variance = sum_i C_i^2 (u_i-l_i)^2 / 12
    max_dev  = sum_i |C_i| (u_i-l_i)/2

The Hoeffding denominator uses K^2 ||C||_2^2 with
K = max_i (u_i - l_i); the Bernstein denominator uses the variance and
max deviation directly. Constant functions (zero coefficients) bypass
the inequalities: their CDF is an indicator.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionError
from .networks import InputRegion


class Method(str, Enum):
    HOEFFDING = "hoeffding"
    BERNSTEIN = "bernstein"


@dataclass(frozen=True)
class LinearMoments:
    mu: float
    var: float
    max_dev: float
    range_norm: float  # K * ||C||_2
    K: float


@dataclass(frozen=True)
class CdfBounds:
    """The four CDF bounds feeding the probability interval."""

    F_dU_lo: float  # lower bound on F_{delta_U}(eps)
    F_negdL_lo: float  # lower bound on F_{-delta_L}(eps)
    F_dL_hi: float  # upper bound on F_{delta_L}(eps)
    F_negdU_hi: float  # upper bound on F_{-delta_U}(eps)


@dataclass(frozen=True)
class ProbabilityInterval:
    gamma_min: float
    gamma_max: float
    method: Method


def moments(C: np.ndarray, d: float, region: InputRegion) -> LinearMoments:
    C = np.asarray(C, dtype=np.float64).reshape(-1)
    if C.shape[0] != region.dim:
        raise DimensionError(
            f"coefficient length {C.shape[0]} != region dimension {region.dim}"
        )
    w = region.widths()
    mu = float(C @ ((region.lower + region.upper) / 2.0) + d)
    var = float(np.sum(C * C * w * w) / 12.0)
    max_dev = float(np.sum(np.abs(C) * w) / 2.0)
    K = float(w.max()) if w.size else 0.0
    range_norm = K * float(np.sqrt(np.sum(C * C)))
    return LinearMoments(mu=mu, var=var, max_dev=max_dev, range_norm=range_norm, K=K)


def _indicator_cdf(mu: float, eps: float) -> float:
    """Exact CDF of a constant variable: P(Z <= eps)."""
    return 1.0 if mu <= eps else 0.0


def _hoeffding_tail(t: float, range_norm: float) -> float:
    """Upper bound on P(Z - E[Z] >= t): exp(-2 t^2 / range_norm^2)."""
    if range_norm == 0.0:
        return 0.0 if t > 0 else 1.0
    return float(np.exp(-2.0 * t * t / (range_norm * range_norm)))


def hoeffding_bounds(eps: float, lower: LinearMoments, upper: LinearMoments) -> CdfBounds:
    """Four CDF bounds from the variance-agnostic tail inequality."""
    # constant envelopes get the exact indicator CDF
    if upper.range_norm == 0.0:
        f_du_lo = _indicator_cdf(upper.mu, eps)
        f_negdu_hi = _indicator_cdf(-upper.mu, eps)
    else:
        t = eps - upper.mu
        f_du_lo = 1.0 - _hoeffding_tail(t, upper.range_norm) if t >= 0 else 0.0
        t = eps + upper.mu
        f_negdu_hi = _hoeffding_tail(-t, upper.range_norm) if t <= 0 else 1.0
    if lower.range_norm == 0.0:
        f_negdl_lo = _indicator_cdf(-lower.mu, eps)
        f_dl_hi = _indicator_cdf(lower.mu, eps)
    else:
        t = eps + lower.mu
        f_negdl_lo = 1.0 - _hoeffding_tail(t, lower.range_norm) if t >= 0 else 0.0
        t = eps - lower.mu
        f_dl_hi = _hoeffding_tail(-t, lower.range_norm) if t <= 0 else 1.0
    return CdfBounds(f_du_lo, f_negdl_lo, f_dl_hi, f_negdu_hi)


def _bernstein_tail(t: float, var: float, max_dev: float) -> float:
    """Upper bound on P(Z - E[Z] >= t):
    exp(-t^2 / (2 var + 2 max_dev t / 3))."""
    denom = 2.0 * var + 2.0 / 3.0 * max_dev * t
    if denom == 0.0:
        return 0.0 if t > 0 else 1.0
    return float(np.exp(-t * t / denom))


def bernstein_bounds(eps: float, lower: LinearMoments, upper: LinearMoments) -> CdfBounds:
    """Four CDF bounds from the variance-aware tail inequality.
    Var(-Z) = Var(Z) and the max deviation is symmetric."""
    if upper.max_dev == 0.0 and upper.var == 0.0:
        f_du_lo = _indicator_cdf(upper.mu, eps)
        f_negdu_hi = _indicator_cdf(-upper.mu, eps)
    else:
        t = eps - upper.mu
        f_du_lo = 1.0 - _bernstein_tail(t, upper.var, upper.max_dev) if t >= 0 else 0.0
        t = eps + upper.mu
        f_negdu_hi = _bernstein_tail(-t, upper.var, upper.max_dev) if t <= 0 else 1.0
    if lower.max_dev == 0.0 and lower.var == 0.0:
        f_negdl_lo = _indicator_cdf(-lower.mu, eps)
        f_dl_hi = _indicator_cdf(lower.mu, eps)
    else:
        t = eps + lower.mu
        f_negdl_lo = 1.0 - _bernstein_tail(t, lower.var, lower.max_dev) if t >= 0 else 0.0
        t = eps - lower.mu
        f_dl_hi = _bernstein_tail(-t, lower.var, lower.max_dev) if t <= 0 else 1.0
    return CdfBounds(f_du_lo, f_negdl_lo, f_dl_hi, f_negdu_hi)


def cdf_bounds(
    method: Method, eps: float, lower: LinearMoments, upper: LinearMoments
) -> CdfBounds:
    if method is Method.HOEFFDING:
        return hoeffding_bounds(eps, lower, upper)
    return bernstein_bounds(eps, lower, upper)


def combine(parts: CdfBounds, method: Method) -> ProbabilityInterval:
    gamma_min = min(max(parts.F_dU_lo + parts.F_negdL_lo - 1.0, 0.0), 1.0)
    gamma_max = min(max(parts.F_dL_hi + parts.F_negdU_hi - 1.0, 0.0), 1.0)
    gamma_max = max(gamma_max, gamma_min)
    return ProbabilityInterval(gamma_min=gamma_min, gamma_max=gamma_max, method=method)


def interval_for(
    method: Method, eps: float, lower: LinearMoments, upper: LinearMoments
) -> ProbabilityInterval:
    return combine(cdf_bounds(method, eps, lower, upper), method)


def tightness_holds(var: float, K: float, max_dev: float, t: float) -> bool:
    """Whether the variance-aware exponent strictly dominates the
    variance-agnostic one: var < K^2/4 - max_dev * t / 3."""
    return var < K * K / 4.0 - max_dev * t / 3.0
