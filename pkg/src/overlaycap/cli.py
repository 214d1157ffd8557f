"""Command line entry point: ``overlaycap {figure,report,sweep,validate}``."""

from __future__ import annotations

import argparse
import os
import sys
import warnings
from pathlib import Path

from . import capacity_model as cm
from .figures import FIGURE_IDS, run_figure, run_report, run_sweep
from .mc_oracle import ConfigurationError
from .numerics import DomainError
from .scenario import Scenario, ScenarioError, parse_scenario, with_sim
from .stable_interference import UnsupportedExponentError
from .validation import run_validation

OUTPUT_DIR_ENV = "OVERLAYCAP_OUTPUT_DIR"

EXIT_OK, EXIT_VALIDATION_FAILED, EXIT_CONFIG_ERROR = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="scenario file (key = value); omitted keys use the default operating point")
    common.add_argument("--out", metavar="PATH",
                        help=f"output CSV; default stdout, or <${OUTPUT_DIR_ENV}>/<command>.csv when set")

    p = argparse.ArgumentParser(
        prog="overlaycap",
        description="Transmission capacities of overlaid primary/secondary Poisson networks.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("figure", parents=[common], help="data series of a figure (1-6)")
    f.add_argument("n", type=int, choices=FIGURE_IDS)
    sub.add_parser("report", parents=[common], help="single overlaid operating point")
    sub.add_parser("sweep", parents=[common], help="sweep the scenario's sweep variable")
    v = sub.add_parser("validate", parents=[common], help="Monte Carlo validation of the closed forms")
    v.add_argument("--seed", type=int, default=None, help="RNG seed, unsigned 64-bit (default: config or 0)")
    v.add_argument("--trials", type=int, default=None, help="trials per simulated field (default: config or 100000)")
    v.add_argument("--workers", type=int, default=1, help="threads for trial blocks; output does not depend on it (default 1)")
    v.add_argument("--export-samples", metavar="PATH",
                   help="write single-network interference samples (.csv text, otherwise little-endian float64)")
    return p


def _load(path) -> Scenario:
    if path is None:
        return Scenario()
    return parse_scenario(Path(path).read_text())


def _write(text: str, out, default_name: str):
    if out is None and os.environ.get(OUTPUT_DIR_ENV):
        out = Path(os.environ[OUTPUT_DIR_ENV]) / default_name
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        sc = _load(args.config)
        if args.command == "figure":
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                table = run_figure(args.n, sc)
            for w in caught:
                if not issubclass(w.category, cm.TaylorRegimeWarning):
                    print(f"warning: {w.message}", file=sys.stderr)
            _write(table.to_csv(), args.out, f"figure{args.n}.csv")
        elif args.command == "report":
            _write(run_report(sc).to_csv(), args.out, "report.csv")
        elif args.command == "sweep":
            if sc.sweep is None:
                raise ScenarioError("sweep needs a 'sweep = <variable>' entry in the config")
            _write(run_sweep(sc).to_csv(), args.out, "sweep.csv")
        else:
            sc = with_sim(sc, trials=args.trials, seed=args.seed)
            table, ok = run_validation(sc, workers=args.workers, export=args.export_samples)
            _write(table.to_csv(), args.out, "validate.csv")
            return EXIT_OK if ok else EXIT_VALIDATION_FAILED
    except (ScenarioError, ConfigurationError, DomainError, UnsupportedExponentError,
            cm.InfeasibleLinkError, cm.BudgetExhaustedError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
