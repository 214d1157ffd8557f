"""Flat ``key = value`` scenario files.

Example::

    # PR tier
    rho0 = 20
    r0 = 20
    beta0 = 10 dB
    eps0 = 0.01
    sweep = delta_eps
    grid = linspace(0, 0.1, 101)

Omitted keys take the default operating point. Blank lines and ``#`` comments are
ignored. SINR thresholds accept a ``dB`` suffix.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .capacity_model import DENSITY_MODES, DEFAULT_CHANNEL, DEFAULT_PR, DEFAULT_SR, ChannelParams, TierParams
from .mc_oracle import DEFAULT_BIAS_FRACTION

SWEEP_VARIABLES = ("eps0", "delta_eps", "rho1")

DEFAULT_GRIDS = {
    "eps0": tuple(np.linspace(0.001, 0.999, 201).tolist()),
    "delta_eps": tuple(np.linspace(0.0, 0.1, 101).tolist()),
    "rho1": tuple(np.linspace(0.05, 0.4, 100).tolist()),
}


class ScenarioError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class SimSettings:
    """Monte Carlo controls. ``window_radius=None`` sizes the window automatically."""

    trials: int = 100_000
    seed: int = 0
    window_radius: Optional[float] = None
    bias_fraction: float = DEFAULT_BIAS_FRACTION


@dataclass(frozen=True)
class Scenario:
    pr: TierParams = DEFAULT_PR
    sr: TierParams = DEFAULT_SR
    ch: ChannelParams = DEFAULT_CHANNEL
    eps0: float = 0.01
    delta_eps: float = 0.01
    eps1_target: Optional[float] = None
    lambda1: Optional[float] = None
    mode: str = "asymptotic"
    sweep: Optional[str] = None
    grid: tuple[float, ...] = field(default=())
    sim: Optional[SimSettings] = None

    def sweep_grid(self, variable: str) -> tuple[float, ...]:
        if self.sweep == variable and self.grid:
            return self.grid
        return DEFAULT_GRIDS[variable]


# key -> (object, attribute)
_TIER_KEYS = {
    "rho0": ("pr", "power"), "r0": ("pr", "range"), "beta0": ("pr", "sinr_threshold"), "R0": ("pr", "rate"),
    "rho1": ("sr", "power"), "r1": ("sr", "range"), "beta1": ("sr", "sinr_threshold"), "R1": ("sr", "rate"),
    "alpha": ("ch", "alpha"), "gain": ("ch", "gain"), "noise": ("ch", "noise"),
}
_PROB_KEYS = {"eps0": "eps0", "delta_eps": "delta_eps", "eps1": "eps1_target"}
_SIM_KEYS = {
    "sim_trials": "trials", "sim_seed": "seed",
    "sim_window_radius": "window_radius", "sim_bias_fraction": "bias_fraction",
}
KNOWN_KEYS = (
    set(_TIER_KEYS) | set(_PROB_KEYS) | set(_SIM_KEYS) | {"lambda1", "mode", "sweep", "grid"}
)

_LINE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*?)\s*$")
_LINSPACE = re.compile(r"^linspace\(\s*([^,]+),\s*([^,]+),\s*([^)]+)\)$")


def _number(text: str, line: int) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ScenarioError(f"not a number: {text!r}", line) from None
    if not math.isfinite(v):
        raise ScenarioError(f"non-finite value {text!r}", line)
    return v


def _threshold(text: str, line: int) -> float:
    m = re.fullmatch(r"(.+?)\s*dB", text, flags=re.IGNORECASE)
    if m:
        return 10.0 ** (_number(m.group(1), line) / 10.0)
    return _number(text, line)


def _grid(text: str, line: int) -> tuple[float, ...]:
    m = _LINSPACE.match(text)
    if m:
        start, stop = _number(m.group(1), line), _number(m.group(2), line)
        n = _number(m.group(3), line)
        if n != int(n) or n < 1:
            raise ScenarioError("linspace count must be a positive integer", line)
        values = np.linspace(start, stop, int(n)).tolist()
    else:
        values = [_number(t.strip(), line) for t in text.split(",") if t.strip()]
    if not values:
        raise ScenarioError("empty grid", line)
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ScenarioError("grid must be strictly increasing", line)
    return tuple(values)


def parse_scenario(text: str) -> Scenario:
    """Parse a scenario document; raises :class:`ScenarioError` with the offending line."""
    seen: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        m = _LINE.match(body)
        if not m:
            raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = m.group(1), m.group(2)
        if key not in KNOWN_KEYS:
            raise ScenarioError(f"unknown key {key!r}", lineno)
        if key in seen:
            raise ScenarioError(f"duplicate key {key!r}", lineno)
        if not value:
            raise ScenarioError(f"missing value for {key!r}", lineno)
        seen[key] = (value, lineno)

    parts = {
        "pr": dict(DEFAULT_PR.__dict__),
        "sr": dict(DEFAULT_SR.__dict__),
        "ch": dict(DEFAULT_CHANNEL.__dict__),
    }
    kwargs: dict = {}
    sim: dict = {}

    def line_of(key):
        return seen[key][1]

    for key, (value, lineno) in seen.items():
        if key in _TIER_KEYS:
            obj, attr = _TIER_KEYS[key]
            v = _threshold(value, lineno) if key.startswith("beta") else _number(value, lineno)
            parts[obj][attr] = v
        elif key in _PROB_KEYS:
            v = _number(value, lineno)
            if not 0.0 <= v <= 1.0:
                raise ScenarioError(f"{key} must lie in [0, 1]", lineno)
            kwargs[_PROB_KEYS[key]] = v
        elif key == "lambda1":
            v = _number(value, lineno)
            if v < 0:
                raise ScenarioError("lambda1 must be >= 0", lineno)
            kwargs["lambda1"] = v
        elif key == "mode":
            if value not in DENSITY_MODES:
                raise ScenarioError(f"mode must be one of {DENSITY_MODES}", lineno)
            kwargs["mode"] = value
        elif key == "sweep":
            if value not in SWEEP_VARIABLES:
                raise ScenarioError(f"sweep must be one of {SWEEP_VARIABLES}", lineno)
            kwargs["sweep"] = value
        elif key == "grid":
            kwargs["grid"] = _grid(value, lineno)
        elif key in _SIM_KEYS:
            attr = _SIM_KEYS[key]
            if attr in ("trials", "seed"):
                if not re.fullmatch(r"\d+", value):
                    raise ScenarioError(f"{key} must be a non-negative integer, got {value!r}", lineno)
                v = int(value)
                if v >= 2**64 or (attr == "trials" and v < 1):
                    raise ScenarioError(f"{key} out of range: {value}", lineno)
            else:
                v = _number(value, lineno)
                if not v > 0:
                    raise ScenarioError(f"{key} must be > 0", lineno)
            sim[attr] = v

    if "grid" in kwargs and "sweep" not in kwargs:
        raise ScenarioError("grid given without a sweep variable", line_of("grid"))
    if kwargs.get("sweep") == "rho1" and kwargs.get("grid", (1.0,))[0] <= 0:
        raise ScenarioError("rho1 grid must be positive", line_of("grid"))

    built = {}
    for name, cls in (("pr", TierParams), ("sr", TierParams), ("ch", ChannelParams)):
        try:
            built[name] = cls(**parts[name])
        except ValueError as exc:
            keys = [k for k, (o, _) in _TIER_KEYS.items() if o == name and k in seen]
            raise ScenarioError(str(exc), min((line_of(k) for k in keys), default=None)) from None
    return Scenario(**built, **kwargs, sim=SimSettings(**sim) if sim else None)


def emit_scenario(sc: Scenario) -> str:
    """Render a scenario so that ``parse_scenario(emit_scenario(sc)) == sc``."""
    lines = []
    for key, (obj, attr) in _TIER_KEYS.items():
        lines.append(f"{key} = {getattr(getattr(sc, obj), attr)!r}")
    lines.append(f"eps0 = {sc.eps0!r}")
    lines.append(f"delta_eps = {sc.delta_eps!r}")
    if sc.eps1_target is not None:
        lines.append(f"eps1 = {sc.eps1_target!r}")
    if sc.lambda1 is not None:
        lines.append(f"lambda1 = {sc.lambda1!r}")
    lines.append(f"mode = {sc.mode}")
    if sc.sweep is not None:
        lines.append(f"sweep = {sc.sweep}")
    if sc.grid:
        lines.append("grid = " + ", ".join(repr(float(g)) for g in sc.grid))
    if sc.sim is not None:
        lines.append(f"sim_trials = {sc.sim.trials}")
        lines.append(f"sim_seed = {sc.sim.seed}")
        if sc.sim.window_radius is not None:
            lines.append(f"sim_window_radius = {sc.sim.window_radius!r}")
        lines.append(f"sim_bias_fraction = {sc.sim.bias_fraction!r}")
    return "\n".join(lines) + "\n"


def with_sim(sc: Scenario, trials: Optional[int] = None, seed: Optional[int] = None) -> Scenario:
    """Scenario with Monte Carlo settings present, overriding trials/seed if given."""
    sim = sc.sim or SimSettings()
    if trials is not None:
        sim = replace(sim, trials=int(trials))
    if seed is not None:
        sim = replace(sim, seed=int(seed))
    return replace(sc, sim=sim)
