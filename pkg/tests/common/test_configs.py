import pytest

from polaritonrdmft.common.configs import Config, RunConfig
from polaritonrdmft.common.errors import ConfigError
from polaritonrdmft.model import PotentialKind, effective_coupling

HELIUM = {
    "system": {"potential": "SoftHelium"},
    "cavity": {"omega": 0.5535, "g_over_omega": 0.1},
    "grid": {"Lx": 12, "dx": 0.3, "Lq": 8.0, "dq": 0.5},
    "solver": {"method": "rdmft", "ES": 3, "profile": "desk"},
}


def test_defaults_and_types():
    config = RunConfig.from_dict(HELIUM)
    assert config.method == "rdmft"
    assert config["grid.Lx"] == 12.0
    assert isinstance(config["grid.Lx"], float)
    assert config["output.formats"] == ["csv", "json"]
    assert config["protocol.ES_values"] == [10, 20, 30, 40]
    assert config.is_dressed


def test_builders():
    config = RunConfig.from_dict(HELIUM)
    model = config.model()
    assert model.potential.kind is PotentialKind.SOFT_HELIUM
    assert effective_coupling(model.modes[0]).g_over_omega == pytest.approx(0.1)
    assert config.grid().shape == (41, 17)
    assert config.grid(n_modes=0).shape == (41,)
    assert config.basis_size() == 4


def test_config_is_a_plain_registry():
    config = Config(allow_missing=True)
    config.add_value("a.b", int, 3)
    config.parse_dict({"a": {"b": 4.0}})
    assert config["a.b"] == 4
    assert "a.b" in config
    with pytest.raises(ConfigError):
        config.set_value("a.c", 1)


@pytest.mark.parametrize(
    "section, values",
    [
        ("grid", {"Lx": "wide"}),
        ("solver", {"ES": 2.5}),
        ("system", {"interaction": 1}),
        ("solver", {"colour": "red"}),
    ],
)
def test_type_errors(section, values):
    data = {key: dict(value) for key, value in HELIUM.items()}
    data[section].update(values)
    with pytest.raises(ConfigError):
        RunConfig.from_dict(data)


def test_missing_method():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"system": {"potential": "SoftHelium"}})


@pytest.mark.parametrize(
    "overrides",
    [
        {"cavity__lambda": 0.3},
        {"solver__M": 4},
        {"solver__method": "magic"},
        {"solver__profile": "fast"},
        {"cavity__omega": None},
        {"solver__ES": None},
        {"series__variable": "Lx"},
        {"series__variable": "temperature", "series__values": [1.0]},
        {"scan__variable": "Lx", "scan__values": [1.0]},
        {"scan__values": []},
        {"system__table_x": [0.0, 1.0]},
    ],
)
def test_cross_key_validation(overrides):
    config = RunConfig.from_dict(HELIUM).copy_with(**overrides)
    with pytest.raises(ConfigError):
        config.validate()


def test_copy_with_leaves_original():
    config = RunConfig.from_dict(HELIUM)
    other = config.copy_with(cavity__g_over_omega=None, cavity__lambda=0.2, grid__Lx=16.0)
    other.validate()
    assert config["grid.Lx"] == 12.0
    assert other["grid.Lx"] == 16.0
    assert other.model().modes[0].lam == 0.2
    assert "cavity.lambda" not in config


def test_bare_config():
    data = {key: dict(value) for key, value in HELIUM.items() if key != "cavity"}
    config = RunConfig.from_dict(data)
    assert not config.is_dressed
    assert config.modes() == []
    assert config.grid().ndim == 1
    with pytest.raises(ConfigError):
        config.copy_with(series__variable="dq", series__values=[0.3]).validate()


def test_invalid_sections():
    config = RunConfig.from_dict(HELIUM)
    with pytest.raises(ConfigError):
        config.copy_with(system__potential="Lithium").model()
    with pytest.raises(ConfigError):
        config.copy_with(grid__dx=-0.1).grid()
    with pytest.raises(ConfigError):
        config.copy_with(solver__ES=None, solver__M=0).basis_size()


def test_from_file(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('[system]\npotential = "SoftHelium"\n[solver]\nmethod = "exact"\n')
    config = RunConfig.from_file(path)
    assert config.method == "exact"
    with pytest.raises(ConfigError):
        RunConfig.from_file(tmp_path / "missing.toml")
    path.write_text("[system\n")
    with pytest.raises(ConfigError):
        RunConfig.from_file(path)


@pytest.mark.parametrize("profile", ["paper", "desk"])
def test_known_profiles_validate(profile):
    config = RunConfig.from_dict(HELIUM).copy_with(solver__profile=profile)
    config.validate()
    assert config["solver.profile"] == profile


def test_paper_profile_is_default():
    solver = {key: value for key, value in HELIUM["solver"].items() if key != "profile"}
    assert RunConfig.from_dict({**HELIUM, "solver": solver})["solver.profile"] == "paper"
