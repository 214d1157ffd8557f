import math

import numpy as np
import pytest
from scipy import stats

from overlaycap.mc_oracle import (
    ConfigurationError,
    EmpiricalDistribution,
    SimConfig,
    empirical_outage,
    ks_distance,
    outage_from_samples,
    required_window_radius,
    sample_interference,
    truncation_bias,
    wilson_interval,
)
from overlaycap.stable_interference import InterferenceComponent, StableLaw, levy_cdf, levy_quantile
from overlaycap.validation import law_cdf

LAM0 = 2.4137042195419102e-06  # default point, eps0 = 0.01
LAM1 = 3.4134932428333359e-05  # default point, delta_eps = 0.01
T0, T1 = 1.15e-5, 1.5e-5


def pr_tier(lam=LAM0):
    return InterferenceComponent(lam, 20.0)


def test_config_validation():
    with pytest.raises(ConfigurationError):
        SimConfig(0.0, 10, 1)
    with pytest.raises(ConfigurationError):
        SimConfig(10.0, 0, 1)
    with pytest.raises(ConfigurationError):
        SimConfig(10.0, 10, -1)
    with pytest.raises(ConfigurationError):
        SimConfig(1e6, 10, 1, tiers=[InterferenceComponent(1.0, 1.0)])


def test_empty_process_gives_zeros():
    emp = sample_interference(SimConfig(100.0, 1000, 3, tiers=[InterferenceComponent(0.0, 1.0)]))
    assert np.all(emp.samples == 0.0)
    assert emp.total_points == 0
    assert len(emp.samples) == emp.trials == 1000


def test_samples_sorted_and_sized():
    emp = sample_interference(SimConfig(500.0, 5000, 11, tiers=[pr_tier()]))
    assert emp.samples.shape == (5000,)
    assert np.all(np.diff(emp.samples) >= 0)


def test_determinism_and_worker_independence():
    cfg = SimConfig(1000.0, 20000, 2024, tiers=[pr_tier(), InterferenceComponent(LAM1, 0.1)], block_size=1000)
    a = sample_interference(cfg)
    b = sample_interference(cfg)
    c = sample_interference(cfg, workers=4)
    assert a.samples.tobytes() == b.samples.tobytes() == c.samples.tobytes()
    d = sample_interference(SimConfig(1000.0, 20000, 2025, tiers=cfg.tiers, block_size=1000))
    assert d.samples.tobytes() != a.samples.tobytes()


def test_poisson_count_sanity():
    cfg = SimConfig(3000.0, 20000, 5, tiers=[pr_tier()])
    emp = sample_interference(cfg)
    mean_total = cfg.mean_points_per_trial * cfg.trials
    assert abs(emp.total_points - mean_total) <= 3 * math.sqrt(mean_total)


def test_default_point_ks_at_2000m():
    law = StableLaw.single(LAM0, 20.0)
    emp = sample_interference(SimConfig(2000.0, 100_000, 1, tiers=law.components))
    assert ks_distance(emp, law_cdf(law)) <= 0.01


def test_two_tier_matches_merged_single_tier():
    two = [pr_tier(), InterferenceComponent(LAM1, 0.1)]
    d = LAM0 * math.sqrt(20.0) + LAM1 * math.sqrt(0.1)
    merged = [InterferenceComponent(d, 1.0)]
    law = StableLaw(4.0, two)
    r = required_window_radius(two, 4.0, levy_quantile(law, 0.5), 1e-3)
    a = sample_interference(SimConfig(r, 100_000, 10, tiers=two))
    b = sample_interference(SimConfig(r, 100_000, 20, tiers=merged))
    assert stats.ks_2samp(a.samples, b.samples).statistic <= 0.015


def test_outage_at_infinite_margin():
    emp = sample_interference(SimConfig(500.0, 2000, 1, tiers=[pr_tier()]))
    assert outage_from_samples(emp, 1e300).probability == 0.0


def test_outage_infeasible_margin_flagged():
    cfg = SimConfig(500.0, 100, 1, tiers=[pr_tier()])
    est = empirical_outage(cfg, -1e-6)
    assert est.infeasible and est.probability == 1.0


def test_single_network_outage():
    cfg = SimConfig(2000.0, 100_000, 77, tiers=[pr_tier()])
    est = empirical_outage(cfg, T0)
    assert abs(est.probability - 0.01) <= 0.002
    assert est.lower <= est.probability <= est.upper


def test_overlaid_outages():
    tiers = [pr_tier(), InterferenceComponent(LAM1, 0.1)]
    emp = sample_interference(SimConfig(2000.0, 100_000, 78, tiers=tiers))
    pr, sr = outage_from_samples(emp, T0), outage_from_samples(emp, T1)
    assert abs(pr.probability - 0.02) <= pr.half_width + 0.002
    assert abs(sr.probability - 0.0175) <= sr.half_width + 0.002


def test_wilson_interval_against_statsmodels():
    from statsmodels.stats.proportion import proportion_confint

    for k, n in [(0, 100), (10, 1000), (1000, 100_000), (50, 50)]:
        lo, hi = wilson_interval(k, n)
        ref = proportion_confint(k, n, alpha=0.05, method="wilson")
        assert lo == pytest.approx(ref[0], abs=1e-12)
        assert hi == pytest.approx(ref[1], abs=1e-12)


def test_ks_null_sample_from_inverse_cdf():
    law = StableLaw.single(LAM0, 20.0)
    rng = np.random.default_rng(99)
    n = 2000
    xs = np.sort([levy_quantile(law, u) for u in rng.uniform(1e-12, 1 - 1e-12, n)])
    emp = EmpiricalDistribution(xs, n)
    d = ks_distance(emp, lambda x: levy_cdf(law, x))
    assert d <= 1.63 / math.sqrt(n)
    assert d == pytest.approx(stats.kstest(xs, lambda x: levy_cdf(law, x)).statistic, abs=1e-15)


def test_ks_detects_shift():
    law = StableLaw.single(LAM0, 20.0)
    emp = sample_interference(SimConfig(2000.0, 10_000, 4, tiers=law.components))
    shifted = lambda x: np.minimum(law_cdf(law)(x) + 0.1, 1.0)  # noqa: E731
    assert ks_distance(emp, shifted) >= 0.1 - 0.03


def test_ks_constant_offset_lower_bound():
    xs = np.linspace(0.5, 1.5, 1000)
    emp = EmpiricalDistribution(xs, len(xs))
    assert ks_distance(emp, lambda x: np.clip(x - 0.5 + 0.1, 0, 1)) >= 0.1 - 1e-12


def test_required_window_radius():
    r = required_window_radius([InterferenceComponent(2.414e-6, 20.0)], 4.0, 1.15e-5, 1e-3)
    assert r == pytest.approx(114.84435339048927, rel=1e-12)
    assert required_window_radius([pr_tier()], 4.0, T0, 1e12) < 1e-3
    doubled = required_window_radius([InterferenceComponent(2 * LAM0, 20.0)], 4.0, T0, 1e-3)
    assert doubled == pytest.approx(math.sqrt(2) * required_window_radius([pr_tier()], 4.0, T0, 1e-3), rel=1e-14)


@pytest.mark.parametrize("alpha", [2.5, 3.0, 4.0, 5.0])
def test_truncation_bound_honored(alpha):
    comps = [pr_tier(), InterferenceComponent(LAM1, 0.1)]
    r = required_window_radius(comps, alpha, T0, 1e-3)
    assert truncation_bias(comps, alpha, r) <= 1e-3 * T0 * (1 + 1e-12)
    assert truncation_bias(comps, alpha, r) == pytest.approx(1e-3 * T0, rel=1e-10)
    if alpha >= 3.0:
        assert SimConfig(r, 1, 0, alpha=alpha, tiers=comps).truncation_bias_bound <= 1e-3 * T0 * (1 + 1e-12)
    else:
        # window too large to simulate: refused instead of exhausting memory
        with pytest.raises(ConfigurationError):
            SimConfig(r, 1, 0, alpha=alpha, tiers=comps)


def test_truncation_bias_matches_tail_integral():
    from scipy import integrate

    lam, rho, alpha, r = 1e-4, 2.0, 3.5, 50.0
    val, _ = integrate.quad(lambda x: 2 * math.pi * lam * x * rho * x**-alpha, r, np.inf)
    assert truncation_bias([InterferenceComponent(lam, rho)], alpha, r) == pytest.approx(val, rel=1e-9)


def test_export_round_trip(tmp_path):
    emp = sample_interference(SimConfig(500.0, 300, 8, tiers=[pr_tier()]))
    emp.export(tmp_path / "s.bin")
    emp.export(tmp_path / "s.csv")
    raw = (tmp_path / "s.bin").read_bytes()
    assert len(raw) == 8 * 300
    assert np.frombuffer(raw, dtype="<f8").tolist() == emp.samples.tolist()
    assert EmpiricalDistribution.from_binary(tmp_path / "s.bin").samples.tolist() == emp.samples.tolist()
    assert EmpiricalDistribution.from_csv(tmp_path / "s.csv").samples.tolist() == emp.samples.tolist()


@pytest.mark.slow
def test_quantiles_at_one_million_trials():
    law = StableLaw.single(LAM0, 20.0)
    r = required_window_radius(law.components, 4.0, levy_quantile(law, 0.5), 1e-3)
    emp = sample_interference(SimConfig(r, 1_000_000, 31, tiers=law.components))
    for q in (0.1, 0.5, 0.9):
        assert emp.quantile(q) == pytest.approx(levy_quantile(law, q), rel=0.02)


def test_general_alpha_matches_mgf():
    # alpha = 3 has no closed-form CDF; compare the empirical Laplace transform
    from overlaycap.stable_interference import mgf

    comps = [InterferenceComponent(1e-3, 1.0)]
    law = StableLaw(3.0, comps)
    r = required_window_radius(comps, 3.0, 1e-3, 1.0)
    emp = sample_interference(SimConfig(max(r, 300.0), 50_000, 12, alpha=3.0, tiers=comps))
    for s in (1.0, 10.0, 100.0):
        est = np.mean(np.exp(-s * emp.samples))
        assert est == pytest.approx(mgf(law, s), abs=0.01)


def test_ks_handles_ties():
    # uniform samples rounded to a 0.01 grid: every value is repeated
    xs = np.sort(np.round(np.random.default_rng(3).random(20_000), 2))
    emp = EmpiricalDistribution(xs, len(xs))
    d = ks_distance(emp, lambda x: np.clip(x, 0.0, 1.0))
    # rounding moves mass by at most half a grid step
    assert 0.004 <= d <= 0.005 + 0.02
