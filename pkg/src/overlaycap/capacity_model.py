"""Transmission capacity of a primary (PR) network alone and overlaid with a
secondary (SR) network.

All closed forms assume path-loss exponent 4, where aggregate interference is
Levy distributed (see :mod:`overlaycap.stable_interference`). Densities are in
transmitters per m^2, powers in W, rates in bit/s per unit bandwidth and
capacities in bit/s/m^2.

Two density modes exist:

* ``"asymptotic"`` uses the first-order (small outage) expansion of the Q-function
  outage condition, which makes every outage affine in the densities.
* ``"exact"`` solves the Q-function outage condition by root finding.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .numerics import DomainError, check_probability, q_inverse
from .stable_interference import (
    InterferenceComponent,
    StableLaw,
    UnsupportedExponentError,
    tail_probability,
)

_PI_3_2 = math.pi**1.5

DENSITY_MODES = ("asymptotic", "exact")

# outage budgets above this leave the small-outage expansion's accuracy regime
TAYLOR_REGIME_LIMIT = 0.1


class InfeasibleLinkError(ValueError):
    """The link misses its SINR target even without interference."""


class BudgetExhaustedError(ValueError):
    """Outage budgets sum to one or more, leaving no successful transmissions."""


class TaylorRegimeWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TierParams:
    """Transmit power (W), link range (m), linear SINR threshold and rate of one tier."""

    power: float
    range: float
    sinr_threshold: float
    rate: float = 1.0

    def __post_init__(self):
        for name in ("power", "range", "sinr_threshold", "rate"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"TierParams.{name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class ChannelParams:
    alpha: float = 4.0
    gain: float = 1.0
    noise: float = 1e-6

    def __post_init__(self):
        if not self.alpha > 2.0:
            raise DomainError(f"path-loss exponent must exceed 2, got {self.alpha!r}")
        if not (math.isfinite(self.gain) and self.gain > 0.0):
            raise DomainError(f"gain constant must be > 0, got {self.gain!r}")
        if not (math.isfinite(self.noise) and self.noise >= 0.0):
            raise DomainError(f"noise power must be >= 0, got {self.noise!r}")


# default operating point
DEFAULT_PR = TierParams(power=20.0, range=20.0, sinr_threshold=10.0)
DEFAULT_SR = TierParams(power=0.1, range=5.0, sinr_threshold=10.0)
DEFAULT_CHANNEL = ChannelParams(alpha=4.0, gain=1.0, noise=1e-6)


@dataclass(frozen=True)
class CapacityReport:
    """Densities, outages and capacities of one overlaid operating point.

    ``eps1`` is the SR outage induced by the chosen densities. ``kg_exact`` is
    the sum capacity over the single-network capacity; ``kg_approx`` is
    ``1 + c1 / c0``. Infeasible sweep points carry ``feasible=False`` and NaN
    numbers.
    """

    lambda0: float
    lambda1: float
    eps0: float
    delta_eps: float
    eps1: float
    c0: float
    c1: float
    c_sum: float
    kg_exact: float
    kg_approx: float
    saturated: bool = False
    feasible: bool = True
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def infeasible(cls, **known) -> "CapacityReport":
        nan = math.nan
        base = dict(
            lambda0=nan, lambda1=nan, eps0=nan, delta_eps=nan, eps1=nan, c0=nan,
            c1=nan, c_sum=nan, kg_exact=nan, kg_approx=nan,
        )
        base.update(known)
        return cls(**base, feasible=False)


def _require_alpha4(ch: ChannelParams):
    if ch.alpha != 4.0:
        raise UnsupportedExponentError(
            f"closed-form capacities need alpha = 4, got {ch.alpha}"
        )


def _eff_power(tier: TierParams, ch: ChannelParams) -> float:
    # gain constant folded into the interferer power
    return ch.gain * tier.power


def _check_mode(mode: str):
    if mode not in DENSITY_MODES:
        raise ValueError(f"density mode must be one of {DENSITY_MODES}, got {mode!r}")


def _warn_regime(total: float):
    if total > TAYLOR_REGIME_LIMIT:
        warnings.warn(
            f"outage budget {total:.3g} exceeds {TAYLOR_REGIME_LIMIT}; "
            "small-outage expansion may be inaccurate",
            TaylorRegimeWarning,
            stacklevel=3,
        )


def sinr_margin(tier: TierParams, ch: ChannelParams) -> float:
    """Largest aggregate interference (W) at which the link still meets its SINR target."""
    t = ch.gain * tier.power * tier.range**-ch.alpha / tier.sinr_threshold - ch.noise
    if not t > 0.0:
        raise InfeasibleLinkError(
            f"noise {ch.noise} W alone violates the SINR target (margin {t:.3e} W)"
        )
    return t


def interference_law(
    ch: ChannelParams, tiers: Sequence[tuple[TierParams, float]]
) -> StableLaw:
    """Aggregate-interference law for (tier, density) pairs on this channel."""
    return StableLaw(
        ch.alpha, [InterferenceComponent(lam, _eff_power(t, ch)) for t, lam in tiers]
    )


def max_density_single_asymptotic(tier: TierParams, ch: ChannelParams, eps0: float) -> float:
    _require_alpha4(ch)
    eps0 = check_probability(eps0, "eps0")
    t0 = sinr_margin(tier, ch)
    _warn_regime(eps0)
    return eps0 / math.pi * math.sqrt(t0 / _eff_power(tier, ch))


def _exact_dispersion(t: float, outage: float) -> float:
    """Dispersion D at which P(I >= t) equals ``outage`` for a Levy field."""
    if outage == 0.0:
        return 0.0
    if outage >= 1.0:
        raise BudgetExhaustedError("outage target must be < 1 for an exact solution")
    return q_inverse(0.5 * (1.0 - outage)) * math.sqrt(2.0 * t) / _PI_3_2


def max_density_single_exact(tier: TierParams, ch: ChannelParams, eps0: float) -> float:
    """Density solving the Q-function outage condition without expansion."""
    _require_alpha4(ch)
    eps0 = check_probability(eps0, "eps0")
    t0 = sinr_margin(tier, ch)
    return _exact_dispersion(t0, eps0) / math.sqrt(_eff_power(tier, ch))


def max_density_single(tier: TierParams, ch: ChannelParams, eps0: float, mode: str = "asymptotic") -> float:
    _check_mode(mode)
    if mode == "exact":
        return max_density_single_exact(tier, ch, eps0)
    return max_density_single_asymptotic(tier, ch, eps0)


def capacity_single(tier: TierParams, lam: float, eps0: float) -> float:
    eps0 = check_probability(eps0, "eps0")
    if lam < 0:
        raise DomainError(f"density must be >= 0, got {lam!r}")
    return tier.rate * lam * (1.0 - eps0)


def max_sr_density_for_pr_increment(
    pr: TierParams, sr: TierParams, ch: ChannelParams, delta_eps: float
) -> float:
    """SR density that spends an outage increment ``delta_eps`` at PR receivers."""
    _require_alpha4(ch)
    delta_eps = check_probability(delta_eps, "delta_eps")
    t0 = sinr_margin(pr, ch)
    return delta_eps / math.pi * math.sqrt(t0 / _eff_power(sr, ch))


def max_sr_density_for_pr_increment_exact(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, eps0: float, delta_eps: float
) -> float:
    """Exact counterpart: solves P(X + Y >= T0) = eps0 + delta_eps for the SR density.

    Clamped at zero when ``lambda0`` already exhausts the budget.
    """
    _require_alpha4(ch)
    total = check_probability(eps0 + delta_eps, "eps0 + delta_eps")
    t0 = sinr_margin(pr, ch)
    d_total = _exact_dispersion(t0, total)
    lam1 = (d_total - lambda0 * math.sqrt(_eff_power(pr, ch))) / math.sqrt(_eff_power(sr, ch))
    return max(lam1, 0.0)


def pr_capacity_overlaid(pr: TierParams, lambda0: float, eps0: float, delta_eps: float) -> float:
    eps0 = check_probability(eps0, "eps0")
    delta_eps = check_probability(delta_eps, "delta_eps")
    if eps0 + delta_eps >= 1.0:
        raise BudgetExhaustedError(f"eps0 + delta_eps = {eps0 + delta_eps} leaves no success")
    return pr.rate * lambda0 * (1.0 - eps0 - delta_eps)


def sr_outage(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, lambda1: float
) -> float:
    """First-order SR outage, affine in both densities."""
    _require_alpha4(ch)
    t1 = sinr_margin(sr, ch)
    return math.pi / math.sqrt(t1) * (
        lambda0 * math.sqrt(_eff_power(pr, ch)) + lambda1 * math.sqrt(_eff_power(sr, ch))
    )


def sr_outage_exact(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, lambda1: float
) -> float:
    t1 = sinr_margin(sr, ch)
    return tail_probability(interference_law(ch, [(pr, lambda0), (sr, lambda1)]), t1)


def pr_outage(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, lambda1: float
) -> float:
    """First-order PR outage eps0 + delta_eps at the given densities."""
    _require_alpha4(ch)
    t0 = sinr_margin(pr, ch)
    return math.pi / math.sqrt(t0) * (
        lambda0 * math.sqrt(_eff_power(pr, ch)) + lambda1 * math.sqrt(_eff_power(sr, ch))
    )


def max_sr_density_for_sr_outage(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, eps1: float
) -> tuple[float, bool]:
    """SR density at which the first-order SR outage equals ``eps1``.

    Returns ``(density, saturated)``; ``saturated`` is set when PR interference
    alone already exceeds the SR budget and the density was clamped to zero.
    """
    _require_alpha4(ch)
    eps1 = check_probability(eps1, "eps1")
    t1 = sinr_margin(sr, ch)
    rho1 = _eff_power(sr, ch)
    lam1 = eps1 / math.pi * math.sqrt(t1 / rho1) - lambda0 * math.sqrt(_eff_power(pr, ch) / rho1)
    if lam1 < 0.0:
        return 0.0, True
    return lam1, False


def admissible_sr_density(lambda_from_pr_budget: float, lambda_from_sr_budget: float) -> float:
    if lambda_from_pr_budget < 0 or lambda_from_sr_budget < 0:
        raise DomainError("densities must be >= 0")
    return min(lambda_from_pr_budget, lambda_from_sr_budget)


def sr_capacity(sr: TierParams, lambda1: float, eps1: float) -> float:
    eps1 = check_probability(eps1, "eps1")
    if eps1 >= 1.0:
        raise BudgetExhaustedError("SR outage of 1 leaves no successful SR links")
    return sr.rate * lambda1 * (1.0 - eps1)


def sum_capacity_expanded(
    pr: TierParams, sr: TierParams, ch: ChannelParams, lambda0: float, lambda1: float
) -> float:
    """Sum capacity written with both outages replaced by their affine forms."""
    _require_alpha4(ch)
    t0, t1 = sinr_margin(pr, ch), sinr_margin(sr, ch)
    load = lambda0 * math.sqrt(_eff_power(pr, ch)) + lambda1 * math.sqrt(_eff_power(sr, ch))
    r0l0, r1l1 = pr.rate * lambda0, sr.rate * lambda1
    return (r0l0 + r1l1) - math.pi * load * (r0l0 / math.sqrt(t0) + r1l1 / math.sqrt(t1))


def overlaid_report(
    pr: TierParams,
    sr: TierParams,
    ch: ChannelParams,
    eps0: float,
    delta_eps: float,
    eps1_target: Optional[float] = None,
    mode: str = "asymptotic",
) -> CapacityReport:
    """Full overlaid operating point for the given outage budgets.

    The PR density comes from ``eps0``; the SR density is the smaller of the
    density allowed by ``delta_eps`` at PR receivers and, when ``eps1_target``
    is given, the density that keeps SR outage at the target.
    """
    _check_mode(mode)
    _require_alpha4(ch)
    eps0 = check_probability(eps0, "eps0")
    delta_eps = check_probability(delta_eps, "delta_eps")
    if eps0 + delta_eps >= 1.0:
        raise BudgetExhaustedError(f"eps0 + delta_eps = {eps0 + delta_eps} leaves no success")

    if mode == "exact":
        lam0 = max_density_single_exact(pr, ch, eps0)
        lam1_pr = max_sr_density_for_pr_increment_exact(pr, sr, ch, lam0, eps0, delta_eps)
    else:
        _warn_regime(eps0 + delta_eps)
        lam0 = max_density_single_asymptotic(pr, ch, eps0)
        lam1_pr = max_sr_density_for_pr_increment(pr, sr, ch, delta_eps)

    saturated = False
    lam1 = lam1_pr
    if eps1_target is not None:
        if mode == "exact":
            t1 = sinr_margin(sr, ch)
            d1 = _exact_dispersion(t1, check_probability(eps1_target, "eps1_target"))
            lam1_sr = (d1 - lam0 * math.sqrt(_eff_power(pr, ch))) / math.sqrt(_eff_power(sr, ch))
            saturated = lam1_sr < 0.0
            lam1_sr = max(lam1_sr, 0.0)
        else:
            lam1_sr, saturated = max_sr_density_for_sr_outage(pr, sr, ch, lam0, eps1_target)
        lam1 = admissible_sr_density(lam1_pr, lam1_sr)

    if mode == "exact":
        eps1 = sr_outage_exact(pr, sr, ch, lam0, lam1)
    else:
        eps1 = sr_outage(pr, sr, ch, lam0, lam1)
    if eps1 >= 1.0:
        raise BudgetExhaustedError(f"induced SR outage {eps1:.3g} >= 1")

    c0 = pr_capacity_overlaid(pr, lam0, eps0, delta_eps)
    c1 = sr_capacity(sr, lam1, eps1)
    c_sum = c0 + c1
    c_single = capacity_single(pr, lam0, eps0)
    kg_exact = c_sum / c_single if c_single > 0 else math.nan
    kg_approx = 1.0 + c1 / c0 if c0 > 0 else math.nan
    return CapacityReport(
        lambda0=lam0, lambda1=lam1, eps0=eps0, delta_eps=delta_eps, eps1=eps1,
        c0=c0, c1=c1, c_sum=c_sum, kg_exact=kg_exact, kg_approx=kg_approx,
        saturated=saturated,
        extra={"mode": mode, "lambda1_pr_budget": lam1_pr},
    )


def sr_capacity_vs_delta_eps(
    pr: TierParams, sr: TierParams, ch: ChannelParams, eps0: float, delta_eps: float
) -> float:
    """SR capacity as an explicit quadratic in the PR outage increment."""
    _require_alpha4(ch)
    t0, t1 = sinr_margin(pr, ch), sinr_margin(sr, ch)
    k = math.sqrt(t0 / t1)
    return sr.rate / math.pi * math.sqrt(t0 / _eff_power(sr, ch)) * delta_eps * (
        1.0 - k * eps0 - k * delta_eps
    )


def _check_grid(grid: Sequence[float], name: str, positive: bool = False) -> list[float]:
    values = [float(g) for g in grid]
    if not values:
        raise ValueError(f"{name} grid is empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"{name} grid must be strictly increasing")
    if positive and values[0] <= 0.0:
        raise ValueError(f"{name} grid must be positive")
    return values


def tradeoff_sweep_delta_eps(
    pr: TierParams,
    sr: TierParams,
    ch: ChannelParams,
    eps0: float,
    delta_eps_grid: Sequence[float],
    mode: str = "asymptotic",
) -> list[CapacityReport]:
    grid = _check_grid(delta_eps_grid, "delta_eps")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TaylorRegimeWarning)
        reports = [overlaid_report(pr, sr, ch, eps0, d, mode=mode) for d in grid]
    _warn_regime(eps0 + grid[-1])
    return reports


def tradeoff_sweep_sr_power(
    pr: TierParams,
    sr_base: TierParams,
    ch: ChannelParams,
    eps0: float,
    lambda1_fixed: float,
    rho1_grid: Sequence[float],
) -> list[CapacityReport]:
    """Reports as the SR transmit power varies with the SR density held fixed.

    The PR outage increment is the one induced by the SR field at each power.
    Points where the SR link cannot meet its target even without interference,
    or where an outage reaches one, are returned with ``feasible=False``.
    """
    _require_alpha4(ch)
    grid = _check_grid(rho1_grid, "rho1", positive=True)
    if lambda1_fixed < 0:
        raise DomainError("lambda1 must be >= 0")
    lam0 = max_density_single_asymptotic(pr, ch, eps0)
    t0 = sinr_margin(pr, ch)
    c_single = capacity_single(pr, lam0, eps0)
    out = []
    for rho1 in grid:
        sr = TierParams(rho1, sr_base.range, sr_base.sinr_threshold, sr_base.rate)
        delta_eps = math.pi / math.sqrt(t0) * lambda1_fixed * math.sqrt(_eff_power(sr, ch))
        try:
            eps1 = sr_outage(pr, sr, ch, lam0, lambda1_fixed)
            c0 = pr_capacity_overlaid(pr, lam0, eps0, delta_eps)
            c1 = sr_capacity(sr, lambda1_fixed, eps1)
        except (InfeasibleLinkError, BudgetExhaustedError, DomainError):
            out.append(CapacityReport.infeasible(
                lambda0=lam0, lambda1=lambda1_fixed, eps0=eps0, extra={"rho1": rho1}
            ))
            continue
        c_sum = c0 + c1
        out.append(CapacityReport(
            lambda0=lam0, lambda1=lambda1_fixed, eps0=eps0, delta_eps=delta_eps,
            eps1=eps1, c0=c0, c1=c1, c_sum=c_sum, kg_exact=c_sum / c_single,
            kg_approx=1.0 + c1 / c0, extra={"rho1": rho1},
        ))
    return out


@dataclass(frozen=True)
class ConvexityCheck:
    """Shape of SR capacity as a function of the PR outage increment.

    ``convex`` holds when sqrt(T1/T0) > eps0, i.e. the quadratic
    C1(delta_eps) has its vertex at a positive increment;
    ``monotone_region_end`` is that vertex. ``curvature`` is the (constant)
    second derivative, which is negative: the curve is an arch.
    """

    convex: bool
    monotone_region_end: float
    curvature: float


def convexity_check_c1(
    pr: TierParams, sr: TierParams, ch: ChannelParams, eps0: float
) -> ConvexityCheck:
    _require_alpha4(ch)
    t0, t1 = sinr_margin(pr, ch), sinr_margin(sr, ch)
    ratio = math.sqrt(t1 / t0)
    a = sr.rate / math.pi * math.sqrt(t0 / _eff_power(sr, ch))
    curvature = -2.0 * a * math.sqrt(t0 / t1)
    return ConvexityCheck(
        convex=ratio > eps0,
        monotone_region_end=0.5 * (ratio - eps0),
        curvature=curvature,
    )
