import pytest
from hypothesis import given
from hypothesis import strategies as st

from overlaycap.capacity_model import ChannelParams, TierParams
from overlaycap.scenario import (
    DEFAULT_GRIDS,
    Scenario,
    ScenarioError,
    SimSettings,
    emit_scenario,
    parse_scenario,
)


def test_empty_document_gives_default_point():
    sc = parse_scenario("")
    assert sc == Scenario()
    assert (sc.pr.power, sc.pr.range, sc.pr.sinr_threshold) == (20.0, 20.0, 10.0)
    assert (sc.sr.power, sc.sr.range, sc.sr.sinr_threshold) == (0.1, 5.0, 10.0)
    assert sc.ch.noise == 1e-6 and sc.ch.alpha == 4.0
    assert sc.sweep is None and sc.sim is None


def test_db_threshold():
    sc = parse_scenario("beta0 = 10 dB\nbeta1 = 3dB\n")
    assert sc.pr.sinr_threshold == 10.0
    assert sc.sr.sinr_threshold == pytest.approx(1.9952623149688795)


def test_comments_and_blank_lines():
    sc = parse_scenario("# header\n\nrho0 = 10   # watts\n")
    assert sc.pr.power == 10.0


@pytest.mark.parametrize(
    "text, line",
    [
        ("r0 = -5", 1),
        ("eps0 = 0.01\nfoo = 1", 2),
        ("rho0 = abc", 1),
        ("\n\nsweep = delta_eps\ngrid = 0.02, 0.01", 4),
        ("eps0 = 1.5", 1),
        ("grid = 0.1, 0.2", 1),
        ("rho0 = 1\nrho0 = 2", 2),
        ("just text", 1),
        ("sweep = rho1\ngrid = -1, 0.1", 2),
        ("sim_trials = 0", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_linspace_grid():
    sc = parse_scenario("sweep = delta_eps\ngrid = linspace(0, 0.1, 11)")
    assert len(sc.grid) == 11 and sc.grid[-1] == 0.1
    assert sc.sweep_grid("delta_eps") == sc.grid
    assert sc.sweep_grid("eps0") == DEFAULT_GRIDS["eps0"]


def test_default_grids():
    assert len(DEFAULT_GRIDS["eps0"]) == 201
    assert DEFAULT_GRIDS["eps0"][0] == 0.001 and DEFAULT_GRIDS["eps0"][-1] == 0.999
    assert len(DEFAULT_GRIDS["delta_eps"]) == 101 and DEFAULT_GRIDS["delta_eps"][-1] == 0.1


def test_sim_keys_and_big_seed():
    sc = parse_scenario("sim_trials = 1000\nsim_seed = 18446744073709551615\nsim_window_radius = 2000")
    assert sc.sim == SimSettings(trials=1000, seed=2**64 - 1, window_radius=2000.0)


pos = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False)
prob = st.floats(min_value=0.0, max_value=1.0)

scenarios = st.builds(
    Scenario,
    pr=st.builds(TierParams, pos, pos, pos, pos),
    sr=st.builds(TierParams, pos, pos, pos, pos),
    ch=st.builds(ChannelParams, st.floats(2.01, 8), pos, st.floats(0, 1e-3)),
    eps0=prob,
    delta_eps=prob,
    eps1_target=st.none() | prob,
    lambda1=st.none() | st.floats(0, 1e-2),
    mode=st.sampled_from(["asymptotic", "exact"]),
    sweep=st.none(),
    sim=st.none() | st.builds(
        SimSettings,
        trials=st.integers(1, 10**7),
        seed=st.integers(0, 2**64 - 1),
        window_radius=st.none() | pos,
        bias_fraction=pos,
    ),
)


@given(scenarios, st.none() | st.tuples(
    st.sampled_from(["eps0", "delta_eps", "rho1"]),
    st.lists(st.floats(1e-4, 1.0), min_size=1, max_size=20, unique=True),
))
def test_round_trip(sc, sweep):
    if sweep is not None:
        from dataclasses import replace

        sc = replace(sc, sweep=sweep[0], grid=tuple(sorted(sweep[1])))
    assert parse_scenario(emit_scenario(sc)) == sc
