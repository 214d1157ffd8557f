"""Data series behind the capacity figures, plus parameter sweeps, as CSV tables."""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

from . import capacity_model as cm
from .scenario import Scenario, emit_scenario

FIGURE_IDS = (1, 2, 3, 4, 5, 6)


class OutOfScopeWarning(UserWarning):
    pass


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(v)


@dataclass
class Table:
    """Columns are ``(name, unit)`` pairs; rows hold plain Python values."""

    columns: list[tuple[str, str]]
    rows: list[tuple] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def column(self, name: str) -> list:
        i = [c for c, _ in self.columns].index(name)
        return [r[i] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self.comments:
            buf.write(f"# {line}\n")
        for name, unit in self.columns:
            buf.write(f"# column {name}: {unit}\n")
        buf.write(",".join(c for c, _ in self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_fmt(v) for v in row) + "\n")
        return buf.getvalue()


def _scenario_comments(sc: Scenario) -> list[str]:
    return ["scenario: " + "; ".join(emit_scenario(sc).strip().splitlines())]


def _figure1(sc: Scenario) -> Table:
    t = Table(
        [
            ("eps0", "probability"),
            ("lambda0_exact", "TX/m^2"),
            ("c0_over_r0_exact", "TX/m^2"),
            ("lambda0_asymptotic", "TX/m^2"),
        ],
        comments=["figure 1: PR density and normalized capacity vs outage, exact Q-function solution"],
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cm.TaylorRegimeWarning)
        for e in sc.sweep_grid("eps0"):
            lam = cm.max_density_single_exact(sc.pr, sc.ch, e)
            t.rows.append((e, lam, lam * (1.0 - e), cm.max_density_single_asymptotic(sc.pr, sc.ch, e)))
    return t


def _figure2(sc: Scenario) -> Table:
    warnings.warn(
        "figure 2: external upper/lower capacity bounds are out of scope; "
        "only the asymptotic capacity curve is emitted",
        OutOfScopeWarning,
        stacklevel=3,
    )
    t = Table(
        [("eps0", "probability"), ("c0_over_r0_asymptotic", "TX/m^2")],
        comments=[
            "figure 2: asymptotic PR capacity vs outage (bounds curves omitted: out of scope)"
        ],
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cm.TaylorRegimeWarning)
        for e in sc.sweep_grid("eps0"):
            lam = cm.max_density_single_asymptotic(sc.pr, sc.ch, e)
            t.rows.append((e, lam * (1.0 - e)))
    return t


_DELTA_FIGURES = {
    3: ("PR normalized capacity vs PR outage increment",
        [("c0_over_r0", "TX/m^2")], lambda r, sc: (r.c0 / sc.pr.rate,)),
    4: ("SR normalized capacity vs PR outage increment",
        [("c1_over_r1", "TX/m^2"), ("lambda1", "TX/m^2"), ("eps1", "probability")],
        lambda r, sc: (r.c1 / sc.sr.rate, r.lambda1, r.eps1)),
    5: ("capacity gain of the overlay over the PR network alone",
        [("kg_approx", "ratio"), ("kg_exact", "ratio")],
        lambda r, sc: (r.kg_approx, r.kg_exact)),
    6: ("PR vs SR normalized capacity tradeoff, delta_eps as parameter",
        [("c0_over_r0", "TX/m^2"), ("c1_over_r1", "TX/m^2")],
        lambda r, sc: (r.c0 / sc.pr.rate, r.c1 / sc.sr.rate)),
}


def run_figure(fig_id: int, sc: Scenario) -> Table:
    """Data series of figure ``fig_id`` (1..6) for the scenario.

    Figure 1 uses the exact outage solution; the others use first-order
    formulas. Grids come from the scenario's sweep when it names the figure's
    variable, otherwise the defaults in :data:`overlaycap.scenario.DEFAULT_GRIDS`.
    """
    if fig_id == 1:
        t = _figure1(sc)
    elif fig_id == 2:
        t = _figure2(sc)
    elif fig_id in _DELTA_FIGURES:
        title, cols, pick = _DELTA_FIGURES[fig_id]
        reports = cm.tradeoff_sweep_delta_eps(
            sc.pr, sc.sr, sc.ch, sc.eps0, sc.sweep_grid("delta_eps"), mode="asymptotic"
        )
        t = Table([("delta_eps", "probability")] + cols, comments=[f"figure {fig_id}: {title}"])
        for r in reports:
            t.rows.append((r.delta_eps,) + tuple(pick(r, sc)))
    else:
        raise ValueError(f"unknown figure {fig_id}; expected one of {FIGURE_IDS}")
    t.comments.extend(_scenario_comments(sc))
    return t


REPORT_COLUMNS = [
    ("lambda0", "TX/m^2"),
    ("lambda1", "TX/m^2"),
    ("eps0", "probability"),
    ("delta_eps", "probability"),
    ("eps1", "probability"),
    ("c0", "bit/s/m^2"),
    ("c1", "bit/s/m^2"),
    ("c_sum", "bit/s/m^2"),
    ("kg_exact", "ratio"),
    ("kg_approx", "ratio"),
    ("saturated", "flag"),
    ("feasible", "flag"),
]


def _report_row(r: cm.CapacityReport) -> tuple:
    return tuple(getattr(r, name) for name, _ in REPORT_COLUMNS)


def run_report(sc: Scenario) -> Table:
    r = cm.overlaid_report(sc.pr, sc.sr, sc.ch, sc.eps0, sc.delta_eps, sc.eps1_target, mode=sc.mode)
    t = Table(list(REPORT_COLUMNS), [_report_row(r)], comments=[f"overlaid report ({sc.mode} densities)"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cm.TaylorRegimeWarning)
        if sc.eps0 < 1.0:
            exact = cm.max_density_single_exact(sc.pr, sc.ch, sc.eps0)
            asym = cm.max_density_single_asymptotic(sc.pr, sc.ch, sc.eps0)
            rel = abs(asym - exact) / exact if exact > 0 else 0.0
            t.comments.append(
                f"lambda0 exact={exact!r} asymptotic={asym!r} relative_difference={rel!r}"
            )
    t.comments.extend(_scenario_comments(sc))
    return t


def run_sweep(sc: Scenario) -> Table:
    """Sweep the scenario's sweep variable over its grid."""
    if sc.sweep is None:
        raise ValueError("scenario has no sweep variable")
    grid: Sequence[float] = sc.sweep_grid(sc.sweep)
    if sc.sweep == "delta_eps":
        reports = cm.tradeoff_sweep_delta_eps(sc.pr, sc.sr, sc.ch, sc.eps0, grid, mode=sc.mode)
    elif sc.sweep == "eps0":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", cm.TaylorRegimeWarning)
            reports = []
            for e in grid:
                try:
                    reports.append(cm.overlaid_report(
                        sc.pr, sc.sr, sc.ch, e, sc.delta_eps, sc.eps1_target, mode=sc.mode
                    ))
                except cm.BudgetExhaustedError:
                    reports.append(cm.CapacityReport.infeasible(eps0=e, delta_eps=sc.delta_eps))
    else:
        lam1 = sc.lambda1
        if lam1 is None:
            lam1 = cm.max_sr_density_for_pr_increment(sc.pr, sc.sr, sc.ch, sc.delta_eps)
        reports = cm.tradeoff_sweep_sr_power(sc.pr, sc.sr, sc.ch, sc.eps0, lam1, grid)
    t = Table([(sc.sweep, "sweep variable")] + list(REPORT_COLUMNS),
              comments=[f"sweep over {sc.sweep} ({sc.mode} densities)"])
    for x, r in zip(grid, reports):
        t.rows.append((float(x),) + _report_row(r))
    t.comments.extend(_scenario_comments(sc))
    return t
