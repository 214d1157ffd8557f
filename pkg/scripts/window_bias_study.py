"""KS distance of the simulated PR field against the Levy law as the window grows.

A finite window drops the far-field tail, shifting the simulated bulk left by
about 2*pi*lambda*rho*R^(2-alpha)/(alpha-2); this script shows the effect.

    python3 scripts/window_bias_study.py [TRIALS]
"""

import sys

from overlaycap import capacity_model as cm
from overlaycap.mc_oracle import SimConfig, ks_distance, sample_interference, truncation_bias
from overlaycap.stable_interference import levy_quantile
from overlaycap.validation import law_cdf


def main(trials=100_000):
    pr, ch = cm.DEFAULT_PR, cm.DEFAULT_CHANNEL
    lam0 = cm.max_density_single_asymptotic(pr, ch, 0.01)
    law = cm.interference_law(ch, [(pr, lam0)])
    median = levy_quantile(law, 0.5)
    print(f"median interference {median:.3e}")
    print("radius_m  bias/median  ks")
    for radius in (250, 500, 1000, 2000, 4000, 8000):
        emp = sample_interference(SimConfig(radius, int(trials), 0, tiers=law.components))
        bias = truncation_bias(law.components, law.alpha, radius)
        print(f"{radius:8d}  {bias / median:11.4f}  {ks_distance(emp, law_cdf(law)):.5f}")


if __name__ == "__main__":
    main(*sys.argv[1:])
