"""Monte Carlo sampler for aggregate PPP interference at the origin.

Every trial scatters each tier as a Poisson number of points uniformly on a disk
of radius ``window_radius`` and sums ``power * d**-alpha``. Trials are
generated in fixed-size blocks; block ``b`` draws from a Philox stream keyed by
``(seed, b)``, so the result does not depend on how many workers run the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .numerics import DomainError
from .stable_interference import InterferenceComponent

BLOCK_SIZE = 4096
WILSON_Z95 = 1.959963984540054
DEFAULT_BIAS_FRACTION = 1e-3

# mean number of points per trial beyond which a run is refused
MAX_POINTS_PER_TRIAL = 5e6


class ConfigurationError(ValueError):
    pass


def truncation_bias(components: Sequence[InterferenceComponent], alpha: float, radius: float) -> float:
    """Mean interference contributed by points outside the disk of ``radius``."""
    load = math.fsum(c.density * c.power for c in components)
    return 2.0 * math.pi * load * radius ** (2.0 - alpha) / (alpha - 2.0)


def required_window_radius(
    components: Sequence[InterferenceComponent],
    alpha: float,
    margin: float,
    bias_fraction: float = DEFAULT_BIAS_FRACTION,
) -> float:
    """Smallest window radius whose truncated-tail mean is at most ``bias_fraction * margin``."""
    if not alpha > 2.0:
        raise DomainError("alpha must exceed 2")
    if not bias_fraction > 0.0 or not margin > 0.0:
        raise DomainError("bias_fraction and margin must be > 0")
    load = math.fsum(c.density * c.power for c in components)
    if load == 0.0:
        return 0.0
    return (2.0 * math.pi * load / ((alpha - 2.0) * bias_fraction * margin)) ** (1.0 / (alpha - 2.0))


@dataclass(frozen=True)
class SimConfig:
    window_radius: float
    trials: int
    seed: int
    alpha: float = 4.0
    tiers: tuple[InterferenceComponent, ...] = ()
    block_size: int = BLOCK_SIZE

    def __post_init__(self):
        object.__setattr__(self, "tiers", tuple(self.tiers))
        if not (math.isfinite(self.window_radius) and self.window_radius > 0.0):
            raise ConfigurationError(f"window radius must be > 0, got {self.window_radius!r}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ConfigurationError(f"trials must be a positive integer, got {self.trials!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigurationError("seed must be an unsigned 64-bit integer")
        if not self.alpha > 2.0:
            raise ConfigurationError(f"alpha must exceed 2, got {self.alpha!r}")
        if self.block_size < 1:
            raise ConfigurationError("block_size must be >= 1")
        if self.mean_points_per_trial > MAX_POINTS_PER_TRIAL:
            raise ConfigurationError(
                f"{self.mean_points_per_trial:.3g} points per trial exceeds {MAX_POINTS_PER_TRIAL:.0g}"
            )

    @property
    def area(self) -> float:
        return math.pi * self.window_radius**2

    @property
    def mean_points_per_trial(self) -> float:
        return sum(c.density for c in self.tiers) * self.area

    @property
    def truncation_bias_bound(self) -> float:
        return truncation_bias(self.tiers, self.alpha, self.window_radius)


@dataclass
class EmpiricalDistribution:
    """Sorted interference samples (W) from ``trials`` independent snapshots."""

    samples: np.ndarray
    trials: int
    total_points: int = 0
    truncation_bias_bound: float = 0.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.shape != (self.trials,):
            raise ValueError("sample count must equal the trial count")

    def cdf(self, x):
        return np.searchsorted(self.samples, x, side="right") / self.trials

    def quantile(self, q):
        return np.quantile(self.samples, q)

    def to_binary(self, path) -> None:
        """One little-endian float64 per trial, no header."""
        self.samples.astype("<f8").tofile(path)

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            for v in self.samples:
                fh.write(f"{float(v)!r}\n")

    def export(self, path) -> None:
        if Path(path).suffix.lower() == ".csv":
            self.to_csv(path)
        else:
            self.to_binary(path)

    @classmethod
    def from_binary(cls, path) -> "EmpiricalDistribution":
        data = np.fromfile(path, dtype="<f8").astype(float)
        return cls(np.sort(data), len(data))

    @classmethod
    def from_csv(cls, path) -> "EmpiricalDistribution":
        data = np.loadtxt(path, dtype=float, ndmin=1)
        return cls(np.sort(data), len(data))


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(block),))
    return np.random.Generator(np.random.Philox(ss))


def _simulate_block(cfg: SimConfig, block: int, n: int) -> tuple[np.ndarray, int]:
    rng = _block_rng(cfg.seed, block)
    r2 = cfg.window_radius**2
    half_alpha = 0.5 * cfg.alpha
    total = np.zeros(n)
    points = 0
    for tier in cfg.tiers:
        mean = tier.density * cfg.area
        counts = rng.poisson(mean, size=n)
        m = int(counts.sum())
        points += m
        if m == 0:
            continue
        # area-uniform radius: d^2 = R^2 * U, with U in (0, 1]
        d2 = r2 * (1.0 - rng.random(m))
        owner = np.repeat(np.arange(n), counts)
        total += np.bincount(owner, weights=tier.power * d2**-half_alpha, minlength=n)
    return total, points


def sample_interference(cfg: SimConfig, workers: int = 1) -> EmpiricalDistribution:
    """Draw ``cfg.trials`` interference values at the origin.

    Output is identical for any ``workers``; blocks are reduced in index order.
    """
    starts = range(0, cfg.trials, cfg.block_size)
    jobs = [(b, min(cfg.block_size, cfg.trials - s)) for b, s in enumerate(starts)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _simulate_block(cfg, *j), jobs))
    else:
        parts = [_simulate_block(cfg, *j) for j in jobs]
    samples = np.concatenate([p[0] for p in parts]) if parts else np.zeros(0)
    if not np.all(np.isfinite(samples)):
        raise ConfigurationError("interference overflowed; check powers and window")
    return EmpiricalDistribution(
        np.sort(samples),
        cfg.trials,
        total_points=sum(p[1] for p in parts),
        truncation_bias_bound=cfg.truncation_bias_bound,
    )


def wilson_interval(successes: int, n: int, z: float = WILSON_Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = successes / n
    z2 = z * z
    denom = 1.0 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class OutageEstimate:
    probability: float
    half_width: float
    lower: float
    upper: float
    outages: int
    trials: int
    infeasible: bool = False


def outage_from_samples(emp: EmpiricalDistribution, margin: float) -> OutageEstimate:
    """Fraction of trials whose interference reaches ``margin``."""
    if not margin > 0.0:
        return OutageEstimate(1.0, 0.0, 1.0, 1.0, emp.trials, emp.trials, infeasible=True)
    k = emp.trials - int(np.searchsorted(emp.samples, margin, side="left"))
    lo, hi = wilson_interval(k, emp.trials)
    return OutageEstimate(k / emp.trials, 0.5 * (hi - lo), lo, hi, k, emp.trials)


def empirical_outage(cfg: SimConfig, margin: float, workers: int = 1) -> OutageEstimate:
    if not margin > 0.0:
        return OutageEstimate(1.0, 0.0, 1.0, 1.0, cfg.trials, cfg.trials, infeasible=True)
    return outage_from_samples(sample_interference(cfg, workers), margin)


def ks_distance(emp: EmpiricalDistribution, analytic_cdf: Callable) -> float:
    """Two-sided Kolmogorov-Smirnov statistic sup |F_n - F| for a continuous F.

    Tied sample values (e.g. empty-field zeros) are handled by comparing F
    against both one-sided limits of the empirical step function.
    ``analytic_cdf`` is called once on the array of distinct sample values.
    """
    x = emp.samples
    n = len(x)
    if n == 0:
        raise ValueError("empty sample")
    values, counts = np.unique(x, return_counts=True)
    upper = np.cumsum(counts) / n
    lower = upper - counts / n
    f = np.asarray(analytic_cdf(values), dtype=float)
    return float(max(np.max(upper - f), np.max(f - lower)))
