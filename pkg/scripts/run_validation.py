"""Monte Carlo validation over several seeds; prints one summary line per check.

    python3 scripts/run_validation.py [TRIALS] [N_SEEDS]
"""

import sys
import time

from overlaycap.scenario import Scenario, SimSettings
from overlaycap.validation import CHECK_NAMES, run_checks


def main(trials=100_000, n_seeds=5):
    trials, n_seeds = int(trials), int(n_seeds)
    by_name = {n: [] for n in CHECK_NAMES}
    start = time.perf_counter()
    for seed in range(n_seeds):
        for c in run_checks(Scenario(sim=SimSettings(trials=trials, seed=seed))):
            by_name[c.quantity].append(c)
    print(f"{n_seeds} seeds x {trials} trials in {time.perf_counter() - start:.1f}s")
    for name, checks in by_name.items():
        emp = [c.empirical for c in checks]
        fails = sum(c.status == "fail" for c in checks)
        print(f"{name:22s} analytic={checks[0].analytic:.5f} "
              f"empirical min/max={min(emp):.5f}/{max(emp):.5f} failures={fails}")


if __name__ == "__main__":
    main(*sys.argv[1:])
