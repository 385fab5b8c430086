import math
from pathlib import Path

import pytest

from slowlight.config import (
    GridSpec,
    ProfileSpec,
    build_profile,
    load_scenario,
    parse_complex,
    parse_float,
    parse_scenario,
)
from slowlight.background import Constant, ExponentialSwitch, TanhSwitch
from slowlight.errors import ConfigError
from slowlight.model import PhysicalParams

SCENARIOS = Path(__file__).resolve().parents[1] / "scenarios"


@pytest.mark.parametrize("value, expected", [
    (2, 2 + 0j), (1.5, 1.5 + 0j), ([0.0, -4.1], -4.1j), ("4.1j", 4.1j), ("4.1i", 4.1j), ("1-2i", 1 - 2j),
])
def test_parse_complex(value, expected):
    assert parse_complex(value) == expected


@pytest.mark.parametrize("value", [True, "abc", [1, 2, 3]])
def test_parse_complex_rejects(value):
    with pytest.raises(ConfigError):
        parse_complex(value)


def test_parse_float():
    assert parse_float("inf", "x") == math.inf and parse_float(3, "x") == 3.0
    with pytest.raises(ConfigError):
        parse_float("three", "x")


def test_defaults():
    sc = parse_scenario("")
    assert sc.family == "slow" and sc.method == "closed-form"
    assert sc.spectral.lambda0 == 4.1j and sc.params == PhysicalParams()
    assert sc.grid == GridSpec() and sc.grid.tau.size == 121


@pytest.mark.parametrize("name", ["knocking_down.toml", "memory_bit.toml", "stopping.toml"])
def test_shipped_scenarios_parse(name):
    sc = load_scenario(SCENARIOS / name)
    assert sc.source.endswith(name)
    assert sc.echo()["family"] == sc.family


def _err(text):
    with pytest.raises(ConfigError) as exc:
        parse_scenario(text)
    return exc.value


def test_errors_carry_field_and_line():
    e = _err("[grid]\ntau = [-1.0, 1.0, 0]\n")
    assert e.field == "grid.tau" and e.line == 2
    e = _err("[solution]\n\nfamily = \"wobbly\"\n")
    assert e.field == "solution.family" and e.line == 3
    assert _err("[nonsense]\na = 1\n").field == "nonsense"
    assert _err("[physics]\nnu = 1\n").field == "physics.nu"
    assert _err("[verify]\npde = 1\n").field == "verify.pde"
    assert _err("[grid]\ntau = [1.0, -1.0, 5]\n").field == "grid.tau"
    assert _err("[physics]\nnu0 = = 2\n").line == 2


@pytest.mark.parametrize("text, field", [
    ('[background]\nkind = "exponential"\n[solution]\nfamily = "slow"', "solution.family"),
    ('[solution]\nfamily = "zero-background"', "solution.family"),
    ('[physics]\nk_phase = 0.2\nx_excited = 1.0\n[background]\nkind = "exponential"\n'
     '[solution]\nfamily = "time-dependent"', "physics.k_phase"),
    ('[spectral]\nc3 = 1\n[background]\nkind = "exponential"\n[solution]\nfamily = "general"', "spectral.c3"),
    ('[solution]\nfamily = "fast"', "spectral.c3"),
    ('[spectral]\nlambda0 = "-4.1j"\n[background]\nkind = "tanh"\n[solution]\nfamily = "time-dependent"',
     "solution.method"),
    ('[spectral]\nlambda0 = "4.1j"\n[background]\nkind = "tanh"\n[solution]\nfamily = "time-dependent"\n'
     'method = "iterative"', "solution.method"),
    ('[background]\nkind = "exponential"\n[solution]\nfamily = "time-dependent"', "spectral.lambda0"),
    ('[observables]\nstopping = true', "observables.stopping"),
    ('[physics]\nomega0 = 5.0', "spectral.lambda0"),
])
def test_validation_before_compute(text, field):
    assert _err(text).field == field


def test_with_value_for_sweeps():
    sc = load_scenario(SCENARIOS / "stopping.toml")
    assert sc.with_value("background.alpha", 8.0).profile.alpha == 8.0
    assert sc.with_value("spectral.lambda0", "-3j").spectral.lambda0 == -3j
    assert sc.with_value("physics.nu0", 2.0).params.nu0 == 2.0
    for bad in ("alpha", "grid.tau", "background.beta", "physics.speed"):
        with pytest.raises(ConfigError):
            sc.with_value(bad, 1.0)


def test_build_profile_kinds(tmp_path):
    p = PhysicalParams()
    assert isinstance(build_profile(ProfileSpec("constant"), p), Constant)
    assert isinstance(build_profile(ProfileSpec("exponential"), p), ExponentialSwitch)
    assert isinstance(build_profile(ProfileSpec("tanh"), p), TanhSwitch)
    with pytest.raises(ConfigError):
        build_profile(ProfileSpec("tabulated"), p)


def test_tabulated_path_is_relative_to_config(tmp_path):
    (tmp_path / "prof.txt").write_text("# tau re im\n-5 1 0\n0 0.5 0\n5 0 0\n")
    cfg = tmp_path / "s.toml"
    cfg.write_text('[spectral]\nlambda0 = "-4.1j"\n[background]\nkind = "tabulated"\npath = "prof.txt"\n'
                   '[solution]\nfamily = "time-dependent"\nmethod = "ode"\n')
    sc = load_scenario(cfg)
    assert Path(sc.profile.path) == tmp_path / "prof.txt"
    assert abs(sc.build_profile().evaluate(0.0) - 0.5) < 1e-12


def test_tabulated_error_points_into_data_file(tmp_path):
    (tmp_path / "bad.txt").write_text("0 1\n1 2 3 4\n")
    cfg = tmp_path / "s.toml"
    cfg.write_text('[spectral]\nlambda0 = "-4.1j"\n[background]\nkind = "tabulated"\npath = "bad.txt"\n'
                   '[solution]\nfamily = "time-dependent"\nmethod = "ode"\n')
    with pytest.raises(ConfigError) as exc:
        load_scenario(cfg)
    assert exc.value.field.endswith("bad.txt") and exc.value.line == 2
