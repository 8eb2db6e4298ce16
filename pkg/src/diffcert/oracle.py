"""Independent validation oracles: Monte-Carlo probability estimation
(Philox counter-based generator, Clopper-Pearson intervals) and dense
grid checks of envelope soundness on low-dimensional regions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .compress import AlignedPair, forward_compressed
from .errors import DimensionError
from .networks import InputRegion, forward
from .propagate import ErrorEnvelope

DEFAULT_CONFIDENCE = 0.999


@dataclass(frozen=True)
class EmpiricalEstimate:
    p_hat: float
    n_samples: int
    ci_low: float
    ci_high: float
    seed: int
    confidence: float = DEFAULT_CONFIDENCE

    def to_json(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "n_samples": self.n_samples,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "confidence": self.confidence,
            "seed": self.seed,
            "rng": "philox4x64",
        }


def clopper_pearson(successes: int, n: int, confidence: float) -> tuple[float, float]:
    """Exact binomial two-sided confidence interval."""
    alpha = 1.0 - confidence
    if successes == 0:
        lo = 0.0
    else:
        lo = float(stats.beta.ppf(alpha / 2.0, successes, n - successes + 1))
    if successes == n:
        hi = 1.0
    else:
        hi = float(stats.beta.ppf(1.0 - alpha / 2.0, successes + 1, n - successes))
    return lo, hi


def sample_region(region: InputRegion, n: int, seed: int) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(seed))
    return rng.uniform(region.lower, region.upper, size=(n, region.dim))


def mc_probability(
    pair: AlignedPair,
    region: InputRegion,
    eps: float,
    n: int,
    seed: int,
    output_index: int | None = None,
    confidence: float = DEFAULT_CONFIDENCE,
    workers: int = 1,
) -> EmpiricalEstimate:
    """Seeded estimate of P(|f(X) - f'(X)| <= eps) for X uniform on the
    region, exact network execution on both sides.

    With workers > 1, the sample count is split into chunks with
    per-chunk derived seeds; success counts merge order-independently.
    """
    if n < 1:
        raise ValueError("need at least one sample")

    def count_chunk(chunk_n: int, chunk_seed) -> int:
        rng = np.random.Generator(np.random.Philox(chunk_seed))
        xs = rng.uniform(region.lower, region.upper, size=(chunk_n, region.dim))
        diff = forward(pair.original, xs) - forward_compressed(pair, xs)
        if output_index is not None:
            ok = np.abs(diff[:, output_index]) <= eps
        else:
            ok = np.all(np.abs(diff) <= eps, axis=1)
        return int(ok.sum())

    if workers <= 1:
        successes = count_chunk(n, seed)
    else:
        from concurrent.futures import ThreadPoolExecutor

        base = n // workers
        counts = [base + (1 if i < n % workers else 0) for i in range(workers)]
        seeds = np.random.SeedSequence(seed).spawn(workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futs = [
                pool.submit(count_chunk, c, s)
                for c, s in zip(counts, seeds) if c > 0
            ]
            successes = sum(f.result() for f in futs)
    lo, hi = clopper_pearson(successes, n, confidence)
    return EmpiricalEstimate(
        p_hat=successes / n, n_samples=n, ci_low=lo, ci_high=hi,
        seed=seed, confidence=confidence,
    )


def grid_envelope_check(
    pair: AlignedPair,
    region: InputRegion,
    envelope: ErrorEnvelope,
    points_per_dim: int = 21,
    max_dim: int = 4,
) -> tuple[bool, float]:
    """Dense-grid containment check of the envelope against the exact
    difference. Returns (sound, worst_violation); a positive violation
    means the envelope failed somewhere by that margin."""
    if region.dim > max_dim:
        raise DimensionError(f"grid check limited to {max_dim} dimensions")
    axes = [
        np.linspace(region.lower[i], region.upper[i], points_per_dim)
        for i in range(region.dim)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    xs = np.stack([m.ravel() for m in mesh], axis=1)
    diff = forward(pair.original, xs) - forward_compressed(pair, xs)
    lower = xs @ envelope.C_low.T + envelope.d_low
    upper = xs @ envelope.C_up.T + envelope.d_up
    violation = float(np.max(np.maximum(lower - diff, diff - upper)))
    return violation <= 0.0, violation


def envelope_sample_check(
    pair: AlignedPair,
    region: InputRegion,
    envelope: ErrorEnvelope,
    n: int,
    seed: int,
) -> float:
    """Worst envelope violation over n uniform samples (positive means
    unsound at that sample)."""
    xs = sample_region(region, n, seed)
    diff = forward(pair.original, xs) - forward_compressed(pair, xs)
    lower = xs @ envelope.C_low.T + envelope.d_low
    upper = xs @ envelope.C_up.T + envelope.d_up
    return float(np.max(np.maximum(lower - diff, diff - upper)))
