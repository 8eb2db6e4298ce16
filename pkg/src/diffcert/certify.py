"""Certification drivers: probability intervals with adaptive domain
partitioning, certified radii via bisection, and the deterministic
worst-case radius baseline.
"""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import Method, ProbabilityInterval, interval_for, moments
from .compress import AlignedPair, forward_compressed
from .errors import InfeasibleAtCenter
from .networks import InputRegion, forward
from .propagate import compute_envelope


@dataclass(frozen=True)
class CertificationQuery:
    pair: AlignedPair
    epsilon: float
    method: Method
    output_index: Optional[int] = None  # None = all outputs, min over coords
    # probability mode
    region: Optional[InputRegion] = None
    # radius mode
    center: Optional[np.ndarray] = None
    gamma: Optional[float] = None
    r_max: float = 1.0
    tolerance: float = 1e-3
    max_partitions: int = 1
    clip_lower: Optional[np.ndarray] = None
    clip_upper: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.gamma is not None and not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must lie in (0, 1)")


@dataclass
class CertificationReport:
    mode: str
    method: str
    epsilon: float
    output_index: Optional[int]
    interval: Optional[ProbabilityInterval] = None
    radius: Optional[float] = None
    gamma: Optional[float] = None
    partitions: int = 1
    width_reduction: Optional[float] = None
    wall_time: float = 0.0
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        obj = {
            "mode": self.mode,
            "method": self.method,
            "epsilon": self.epsilon,
            "output_index": self.output_index,
            "partitions": self.partitions,
            "wall_time_s": self.wall_time,
            "notes": self.notes,
        }
        if self.interval is not None:
            obj["gamma_min"] = self.interval.gamma_min
            obj["gamma_max"] = self.interval.gamma_max
            obj["width_reduction"] = self.width_reduction
        if self.radius is not None:
            obj["certified_radius"] = self.radius
            obj["gamma"] = self.gamma
        return obj


@dataclass
class _Cell:
    region: InputRegion
    weight: float
    interval: ProbabilityInterval


def _output_indices(pair: AlignedPair, output_index: Optional[int]) -> list[int]:
    if output_index is None:
        return list(range(pair.original.output_dim))
    if not 0 <= output_index < pair.original.output_dim:
        raise ValueError(f"output index {output_index} out of range")
    return [output_index]


def region_interval(
    pair: AlignedPair,
    region: InputRegion,
    eps: float,
    method: Method,
    output_index: Optional[int],
) -> ProbabilityInterval:
    """Single-cell probability interval: envelope, moments, CDF bounds;
    the minimum over the selected output coordinates.

    When the concretized envelope already certifies the cell outright
    (contained in [-eps, eps], probability exactly 1) or rules it out
    (entirely outside, probability exactly 0) the exact value replaces
    the concentration bounds for that coordinate."""
    env = compute_envelope(pair, region)
    gamma_min, gamma_max = 1.0, 1.0
    for i in _output_indices(pair, output_index):
        d_lo = float(env.delta_lo[i])
        d_hi = float(env.delta_hi[i])
        if d_lo >= -eps and d_hi <= eps:
            continue  # certainly within tolerance on this cell
        if d_lo > eps or d_hi < -eps:
            return ProbabilityInterval(gamma_min=0.0, gamma_max=0.0, method=method)
        lo_m = moments(env.C_low[i], float(env.d_low[i]), region)
        up_m = moments(env.C_up[i], float(env.d_up[i]), region)
        iv = interval_for(method, eps, lo_m, up_m)
        gamma_min = min(gamma_min, iv.gamma_min)
        gamma_max = min(gamma_max, iv.gamma_max)
    return ProbabilityInterval(gamma_min=gamma_min, gamma_max=gamma_max, method=method)


def _split(cell: _Cell) -> Optional[tuple[InputRegion, InputRegion, float, float]]:
    widths = cell.region.widths()
    dim = int(np.argmax(widths))
    if widths[dim] == 0.0:
        return None
    lo, hi = cell.region.lower, cell.region.upper
    mid = 0.5 * (lo[dim] + hi[dim])
    left_hi = hi.copy()
    left_hi[dim] = mid
    right_lo = lo.copy()
    right_lo[dim] = mid
    frac = (mid - lo[dim]) / widths[dim]
    return (
        InputRegion(lower=lo, upper=left_hi),
        InputRegion(lower=right_lo, upper=hi),
        cell.weight * frac,
        cell.weight * (1.0 - frac),
    )


def certify_probability(q: CertificationQuery, max_partitions: Optional[int] = None,
                        width_tolerance: float = 1e-6,
                        threads: int = 1) -> CertificationReport:
    """Adaptive partitioning: repeatedly bisect the sub-box with the
    widest probability interval along its longest edge, then aggregate
    with Lebesgue-measure weights (the uniform law makes the total
    probability the measure-weighted mean of cell probabilities)."""
    if q.region is None:
        raise ValueError("probability mode needs a region")
    budget = max_partitions if max_partitions is not None else q.max_partitions
    if budget < 1:
        raise ValueError("max_partitions must be >= 1")
    start = time.perf_counter()
    cells = [
        _Cell(
            region=q.region,
            weight=1.0,
            interval=region_interval(q.pair, q.region, q.epsilon, q.method, q.output_index),
        )
    ]
    while len(cells) < budget:
        widths = [c.interval.gamma_max - c.interval.gamma_min for c in cells]
        worst = int(np.argmax(widths))
        if widths[worst] <= width_tolerance:
            break
        parts = _split(cells[worst])
        if parts is None:
            break
        left, right, wl, wr = parts
        cells.pop(worst)
        halves = ((left, wl), (right, wr))
        if threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=2) as pool:
                futs = [
                    pool.submit(
                        region_interval, q.pair, region, q.epsilon, q.method,
                        q.output_index,
                    )
                    for region, _ in halves
                ]
            intervals = [f.result() for f in futs]
        else:
            intervals = [
                region_interval(q.pair, region, q.epsilon, q.method, q.output_index)
                for region, _ in halves
            ]
        for (region, weight), interval in zip(halves, intervals):
            cells.append(_Cell(region=region, weight=weight, interval=interval))
    gamma_min = sum(c.weight * c.interval.gamma_min for c in cells)
    gamma_max = sum(c.weight * c.interval.gamma_max for c in cells)
    interval = ProbabilityInterval(
        gamma_min=min(max(gamma_min, 0.0), 1.0),
        gamma_max=min(max(max(gamma_max, gamma_min), 0.0), 1.0),
        method=q.method,
    )
    return CertificationReport(
        mode="probability",
        method=q.method.value,
        epsilon=q.epsilon,
        output_index=q.output_index,
        interval=interval,
        partitions=len(cells),
        width_reduction=1.0 - (interval.gamma_max - interval.gamma_min),
        wall_time=time.perf_counter() - start,
    )


def _ball_region(q: CertificationQuery, r: float) -> InputRegion:
    lo = q.center - r
    hi = q.center + r
    if q.clip_lower is not None:
        lo = np.maximum(lo, q.clip_lower)
        hi = np.maximum(hi, q.clip_lower)
    if q.clip_upper is not None:
        lo = np.minimum(lo, q.clip_upper)
        hi = np.minimum(hi, q.clip_upper)
    return InputRegion(lower=lo, upper=hi)


def _center_feasible(q: CertificationQuery) -> None:
    diff = forward(q.pair.original, q.center) - forward_compressed(q.pair, q.center)
    idx = _output_indices(q.pair, q.output_index)
    worst = float(np.max(np.abs(diff[idx])))
    if worst > q.epsilon:
        raise InfeasibleAtCenter(
            f"|f(x0) - f'(x0)| = {worst} exceeds epsilon = {q.epsilon}"
        )


def _bisect_radius(predicate, r_max: float, tol: float,
                   notes: list) -> float:
    """Largest r in [0, r_max] passing a monotone predicate. A coarse
    grid first sanity-checks monotonicity; on violation we fall back to
    the grid itself."""
    probes = np.linspace(0.0, r_max, 9)[1:]
    values = [predicate(r) for r in probes]
    # boolean predicate trace must be non-increasing
    if any(b and not a for a, b in zip(values, values[1:])):
        warnings.warn("radius predicate is not monotone; using grid search")
        notes.append("predicate non-monotone on coarse grid; grid search fallback")
        step = max(tol, r_max / 4096.0)
        grid = np.arange(r_max, 0.0, -step)
        for r in grid:
            if predicate(float(r)):
                return float(r)
        return 0.0
    if values[-1]:
        return r_max
    lo, hi = 0.0, r_max
    for r, ok in zip(probes, values):
        if ok:
            lo = float(r)
        else:
            hi = float(r)
            break
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return lo


def certified_radius(q: CertificationQuery) -> CertificationReport:
    """Bisection on the ball radius against gamma_min(ball) >= gamma."""
    if q.center is None or q.gamma is None:
        raise ValueError("radius mode needs a center and gamma")
    start = time.perf_counter()
    _center_feasible(q)
    notes: list = []

    def predicate(r: float) -> bool:
        if r <= 0.0:
            return True
        region = _ball_region(q, r)
        sub = CertificationQuery(
            pair=q.pair, epsilon=q.epsilon, method=q.method,
            output_index=q.output_index, region=region,
            max_partitions=q.max_partitions,
        )
        rep = certify_probability(sub)
        return rep.interval.gamma_min >= q.gamma

    r_star = _bisect_radius(predicate, q.r_max, q.tolerance, notes)
    return CertificationReport(
        mode="certified-radius",
        method=q.method.value,
        epsilon=q.epsilon,
        output_index=q.output_index,
        radius=r_star,
        gamma=q.gamma,
        partitions=q.max_partitions,
        wall_time=time.perf_counter() - start,
        notes=notes,
    )


def worst_case_radius(q: CertificationQuery) -> CertificationReport:
    """Bisection against deterministic envelope containment in
    [-epsilon, epsilon]."""
    if q.center is None:
        raise ValueError("radius mode needs a center")
    start = time.perf_counter()
    _center_feasible(q)
    notes: list = []
    idx = _output_indices(q.pair, q.output_index)

    def predicate(r: float) -> bool:
        if r <= 0.0:
            return True
        region = _ball_region(q, r)
        env = compute_envelope(q.pair, region)
        return bool(
            np.all(env.delta_lo[idx] >= -q.epsilon)
            and np.all(env.delta_hi[idx] <= q.epsilon)
        )

    r_star = _bisect_radius(predicate, q.r_max, q.tolerance, notes)
    return CertificationReport(
        mode="worst-case-radius",
        method=q.method.value,
        epsilon=q.epsilon,
        output_index=q.output_index,
        radius=r_star,
        gamma=None,
        wall_time=time.perf_counter() - start,
        notes=notes,
    )


def compare_methods(
    q: CertificationQuery, max_partitions: Optional[int] = None
) -> dict[str, CertificationReport]:
    """Run both inequalities under identical budgets."""
    reports = {}
    for method in (Method.HOEFFDING, Method.BERNSTEIN):
        sub = CertificationQuery(
            pair=q.pair, epsilon=q.epsilon, method=method,
            output_index=q.output_index, region=q.region, center=q.center,
            gamma=q.gamma, r_max=q.r_max, tolerance=q.tolerance,
            max_partitions=q.max_partitions,
            clip_lower=q.clip_lower, clip_upper=q.clip_upper,
        )
        if q.region is not None:
            reports[method.value] = certify_probability(sub, max_partitions)
        else:
            reports[method.value] = certified_radius(sub)
    return reports
