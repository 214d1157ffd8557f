"""Monte Carlo cross-checks of the closed forms for one scenario."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import capacity_model as cm
from .figures import Table
from .mc_oracle import (
    EmpiricalDistribution,
    SimConfig,
    ks_distance,
    outage_from_samples,
    required_window_radius,
    sample_interference,
)
from .scenario import Scenario, SimSettings, with_sim
from .stable_interference import StableLaw, UnsupportedExponentError, levy_cdf, levy_quantile, tail_probability

KS_TOLERANCE = 0.01
OUTAGE_SLACK = 0.002
FALLBACK_WINDOW = 1.0  # m, used when no tier has any interferers


@dataclass(frozen=True)
class Check:
    quantity: str
    nominal: float
    analytic: float
    empirical: float
    ci_half_width: float
    tolerance: float
    status: str  # pass | fail | skipped
    note: str = ""


def law_cdf(law: StableLaw):
    """Analytic CDF on [0, inf), including the point mass at zero of an empty field."""
    def cdf(x):
        x = np.asarray(x, dtype=float)
        if law.dispersion == 0.0:
            return np.ones_like(x)
        out = np.zeros_like(x)
        pos = x > 0
        if np.any(pos):
            out[pos] = levy_cdf(law, x[pos])
        return out
    return cdf


def window_for(law: StableLaw, margin: float, sim: SimSettings) -> float:
    """Window radius keeping truncation bias below ``bias_fraction`` of both the
    SINR margin and the median interference level."""
    if sim.window_radius is not None:
        return sim.window_radius
    if law.dispersion == 0.0:
        return FALLBACK_WINDOW
    reference = min(margin, levy_quantile(law, 0.5))
    return required_window_radius(law.components, law.alpha, reference, sim.bias_fraction)


def _simulate(law: StableLaw, margin: float, sim: SimSettings, stream: int, workers: int) -> tuple[EmpiricalDistribution, SimConfig]:
    cfg = SimConfig(
        window_radius=window_for(law, margin, sim),
        trials=sim.trials,
        # distinct, reproducible stream per simulated field
        seed=(sim.seed + stream * 0x9E3779B97F4A7C15) % 2**64,
        alpha=law.alpha,
        tiers=law.components,
    )
    return sample_interference(cfg, workers=workers), cfg


def _ks_check(name: str, emp: EmpiricalDistribution, law: StableLaw) -> Check:
    if law.dispersion == 0.0:
        # point mass at zero: distance is the share of non-zero samples
        d = float(np.mean(emp.samples != 0.0))
    else:
        d = ks_distance(emp, law_cdf(law))
    return Check(name, 0.0, 0.0, d, math.nan, KS_TOLERANCE, "pass" if d <= KS_TOLERANCE else "fail")


def _outage_check(name: str, emp: EmpiricalDistribution, margin: float, nominal: float, analytic: float) -> Check:
    est = outage_from_samples(emp, margin)
    tol = est.half_width + OUTAGE_SLACK
    ok = abs(est.probability - analytic) <= tol
    return Check(name, nominal, analytic, est.probability, est.half_width, tol, "pass" if ok else "fail")


def _skipped(name: str, note: str) -> Check:
    nan = math.nan
    return Check(name, nan, nan, nan, nan, nan, "skipped", note)


CHECK_NAMES = (
    "ks_levy_pr_single",
    "pr_outage_single",
    "ks_levy_overlaid",
    "pr_outage_overlaid",
    "sr_outage_overlaid",
)


def run_checks(sc: Scenario, workers: int = 1, export: Optional[str] = None) -> list[Check]:
    """Run every Monte Carlo check; infeasible or unsupported cases become skipped rows.

    ``export`` writes the single-network interference samples (``.csv`` or raw
    little-endian float64).
    """
    sc = with_sim(sc)
    sim = sc.sim
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", cm.TaylorRegimeWarning)
            report = cm.overlaid_report(sc.pr, sc.sr, sc.ch, sc.eps0, sc.delta_eps, sc.eps1_target, mode=sc.mode)
    except (cm.InfeasibleLinkError, cm.BudgetExhaustedError, UnsupportedExponentError) as exc:
        return [_skipped(n, str(exc)) for n in CHECK_NAMES]

    t0, t1 = cm.sinr_margin(sc.pr, sc.ch), cm.sinr_margin(sc.sr, sc.ch)
    lam0, lam1 = report.lambda0, report.lambda1
    checks = []

    single = cm.interference_law(sc.ch, [(sc.pr, lam0)])
    emp, _ = _simulate(single, t0, sim, 0, workers)
    if export:
        emp.export(export)
    checks.append(_ks_check("ks_levy_pr_single", emp, single))
    checks.append(_outage_check("pr_outage_single", emp, t0, sc.eps0, tail_probability(single, t0)))

    both = cm.interference_law(sc.ch, [(sc.pr, lam0), (sc.sr, lam1)])
    # the stationary field looks the same from PR and SR receivers
    emp2, _ = _simulate(both, min(t0, t1), sim, 1, workers)
    checks.append(_ks_check("ks_levy_overlaid", emp2, both))
    checks.append(_outage_check(
        "pr_outage_overlaid", emp2, t0,
        cm.pr_outage(sc.pr, sc.sr, sc.ch, lam0, lam1), tail_probability(both, t0),
    ))
    checks.append(_outage_check(
        "sr_outage_overlaid", emp2, t1, report.eps1, tail_probability(both, t1),
    ))
    return checks


VALIDATION_COLUMNS = [
    ("quantity", "name"),
    ("nominal", "closed-form target"),
    ("analytic", "exact Levy value"),
    ("empirical", "Monte Carlo estimate"),
    ("ci_half_width", "Wilson 95% half-width"),
    ("tolerance", "allowed |empirical - analytic|"),
    ("status", "pass/fail/skipped"),
]


def run_validation(sc: Scenario, workers: int = 1, export: Optional[str] = None) -> tuple[Table, bool]:
    """Validation table and overall verdict (``True`` when no check failed)."""
    sc = with_sim(sc)
    checks = run_checks(sc, workers=workers, export=export)
    t = Table(
        list(VALIDATION_COLUMNS),
        comments=[
            f"Monte Carlo validation: trials={sc.sim.trials} seed={sc.sim.seed} "
            f"bias_fraction={sc.sim.bias_fraction!r} ks_tolerance={KS_TOLERANCE} outage_slack={OUTAGE_SLACK}"
        ],
    )
    for c in checks:
        t.rows.append((c.quantity, c.nominal, c.analytic, c.empirical, c.ci_half_width, c.tolerance, c.status))
        if c.note:
            t.comments.append(f"{c.quantity} skipped: {c.note}")
    return t, all(c.status != "fail" for c in checks)
