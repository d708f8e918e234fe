#!/usr/bin/env python3
# coding=utf-8

"""This module implements the configuration parser for polaritonrdmft.
Configurations are TOML files whose tables map onto dotted keys, e.g. `[grid] Lx = 20.0`
becomes `grid.Lx`. The Config class can be shared as a global instance among all files."""

from __future__ import annotations

import copy
import logging
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple, Union

from polaritonrdmft.common.errors import ConfigError
from polaritonrdmft.grid import UniformGrid, make_grid
from polaritonrdmft.model import ModelSpec, PhotonMode, PotentialKind, PotentialSpec, lambda_for

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - Python 3.10 fallback
    import tomli as tomllib

logger = logging.getLogger(__name__)

METHODS = ("exact", "ip", "hf", "rdmft", "grid_hf")
PROFILES = ("paper", "desk")
SERIES_VARIABLES = {
    "Lx": "grid",
    "dx": "grid",
    "Lq": "grid",
    "dq": "grid",
    "ES": "solver",
    "d": "system",
    "g_over_omega": "cavity",
}
SCAN_VARIABLES = ("d", "g_over_omega")
RESONANT_OMEGA = 0.5535


class Config:
    _shared_instance = None

    def __init__(self, allow_missing=False):
        """Initialize an empty configuration instance."""
        self._config_values: Dict[str, Any] = {}
        self._config_types: Dict[str, type] = {}
        self._optional: set = set()
        self._allow_missing = allow_missing

    def add_value(
        self,
        conf_name: str,
        conf_type: type,
        default_value: Optional[Any] = None,
        optional: bool = False,
    ):
        """Define configuration with type and name. Values without default are mandatory
        unless `optional` is set."""
        self._config_types[conf_name] = conf_type
        if default_value is not None:
            self._config_values[conf_name] = default_value
        if optional:
            self._optional.add(conf_name)

    @classmethod
    def get_global(cls):
        """Get a global shared configuration instance"""
        if cls._shared_instance is None:
            cls._shared_instance = cls()
        return cls._shared_instance

    def __getitem__(self, key):
        """Get a config value"""
        return self._config_values[key]

    def __contains__(self, key) -> bool:
        return key in self._config_values

    def get(self, key: str, default: Any = None) -> Any:
        return self._config_values.get(key, default)

    def __repr__(self):
        return "\n".join(f"{name}: {value}" for name, value in sorted(self._config_values.items()))

    def set_value(self, conf_name: str, conf_value: Any):
        if conf_name not in self._config_types:
            raise ConfigError(f"Got unknown config name {conf_name}")
        self._config_values[conf_name] = self._coerce(conf_name, conf_value)

    def unset_value(self, conf_name: str):
        self._config_values.pop(conf_name, None)

    def parse_dict(self, data: Mapping):
        """Parse a (nested) mapping as read from a TOML document."""
        for conf_name, conf_value in _flatten(data):
            self.set_value(conf_name, conf_value)
        if not self._allow_missing:
            self._check_completeness()

    def parse_file(self, path: Union[str, Path]):
        try:
            with open(path, "rb") as file:
                data = tomllib.load(file)
        except (OSError, tomllib.TOMLDecodeError) as err:
            raise ConfigError(f"Cannot read configuration {path}: {err}") from err
        self.parse_dict(data)

    def copy_with(self, **overrides) -> Config:
        """Copy of this configuration with dotted keys given as `section__key=value`."""
        other = copy.deepcopy(self)
        for key, value in overrides.items():
            name = key.replace("__", ".")
            if value is None:
                other.unset_value(name)
            else:
                other.set_value(name, value)
        return other

    def _coerce(self, conf_name: str, conf_value: Any) -> Any:
        conf_type = self._config_types[conf_name]
        if isinstance(conf_value, conf_type) and not (conf_type is int and isinstance(conf_value, bool)):
            return conf_value
        if conf_type is float and isinstance(conf_value, int) and not isinstance(conf_value, bool):
            return float(conf_value)
        if conf_type is int and isinstance(conf_value, float) and conf_value.is_integer():
            return int(conf_value)
        raise ConfigError(
            f"Config {conf_name} expects {conf_type.__name__}, got {type(conf_value).__name__} ({conf_value!r})"
        )

    def _check_completeness(self):
        """Check if all configuration has been set."""
        missing_keys = [
            key
            for key in self._config_types.keys()
            if key not in self._config_values.keys() and key not in self._optional
        ]
        if missing_keys:
            raise ConfigError(f"Mandatory configurations missing: {missing_keys}")


def _flatten(data: Mapping, prefix: str = "") -> Iterable[Tuple[str, Any]]:
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, Mapping):
            yield from _flatten(value, f"{name}.")
        else:
            yield name, value


class RunConfig(Config):
    def __init__(self, allow_missing=False):
        super().__init__(allow_missing)

        self.add_value("system.potential", str, "SoftHelium")
        self.add_value("system.separation", float, 0.0)
        self.add_value("system.stiffness", float, 1.0)
        self.add_value("system.softening", float, optional=True)
        self.add_value("system.table_x", list, optional=True)
        self.add_value("system.table_v", list, optional=True)
        self.add_value("system.n_electrons", int, 2)
        self.add_value("system.interaction_softening", float, 1.0)
        self.add_value("system.interaction", bool, True)

        self.add_value("cavity.omega", float, optional=True)
        self.add_value("cavity.lambda", float, optional=True)
        self.add_value("cavity.g_over_omega", float, optional=True)
        self.add_value("cavity.modes", int, 1)

        self.add_value("grid.Lx", float, 20.0)
        self.add_value("grid.dx", float, 0.1)
        self.add_value("grid.Lq", float, 14.0)
        self.add_value("grid.dq", float, 0.2)

        self.add_value("solver.method", str)
        self.add_value("solver.M", int, optional=True)
        self.add_value("solver.ES", int, optional=True)
        self.add_value("solver.n_states", int, 2)
        self.add_value("solver.profile", str, "paper")
        self.add_value("solver.eps_E", float, optional=True)
        self.add_value("solver.eps_rho", float, optional=True)
        self.add_value("solver.eps_Lambda", float, optional=True)
        self.add_value("solver.eps_mu", float, optional=True)
        self.add_value("solver.max_outer", int, 200)
        self.add_value("solver.max_orbital", int, 500)
        self.add_value("solver.max_occupation", int, 200)
        self.add_value("solver.mixing", float, 0.5)
        self.add_value("solver.n_floor", float, 1e-10)
        self.add_value("solver.max_memory_gib", float, 2.0)
        self.add_value("solver.seed", int, 0)
        self.add_value("solver.checkpoint", str, optional=True)

        self.add_value("series.variable", str, optional=True)
        self.add_value("series.values", list, optional=True)
        self.add_value("series.reference", float, optional=True)
        self.add_value("series.eps_E", float, 1e-8)
        self.add_value("series.eps_rho", float, 1e-5)

        self.add_value("scan.variable", str, optional=True)
        self.add_value("scan.values", list, optional=True)
        self.add_value("scan.warm_start", bool, True)
        self.add_value("scan.exact", bool, False)

        self.add_value("protocol.eps_E", float, 1e-8)
        self.add_value("protocol.eps_rho", float, 1e-5)
        self.add_value("protocol.Lx_values", list, [12.0, 16.0, 20.0, 24.0])
        self.add_value("protocol.dx_values", list, [0.2, 0.15, 0.1])
        self.add_value("protocol.Lq_values", list, [10.0, 12.0, 14.0, 16.0])
        self.add_value("protocol.dq_values", list, [0.3, 0.25, 0.2])
        self.add_value("protocol.ES_values", list, [10, 20, 30, 40])
        self.add_value("protocol.consistency_E", float, 1e-6)
        self.add_value("protocol.consistency_rho", float, 1e-3)
        self.add_value("protocol.fail_fast", bool, False)

        self.add_value("output.directory", str, "out")
        self.add_value("output.formats", list, ["csv", "json"])

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> RunConfig:
        config = cls()
        config.parse_file(path)
        config.validate()
        return config

    @classmethod
    def from_dict(cls, data: Mapping) -> RunConfig:
        config = cls()
        config.parse_dict(data)
        config.validate()
        return config

    @property
    def method(self) -> str:
        return self["solver.method"]

    @property
    def is_dressed(self) -> bool:
        return "cavity.omega" in self and self["cavity.modes"] > 0

    def validate(self):
        """Cross-key checks the type registry cannot express."""
        if self.method not in METHODS:
            raise ConfigError(f"solver.method must be one of {METHODS}, got {self.method!r}")
        if self["solver.profile"] not in PROFILES:
            raise ConfigError(f"solver.profile must be one of {PROFILES}, got {self['solver.profile']!r}")
        if "cavity.lambda" in self and "cavity.g_over_omega" in self:
            raise ConfigError("cavity.lambda and cavity.g_over_omega are mutually exclusive")
        if ("cavity.lambda" in self or "cavity.g_over_omega" in self) and "cavity.omega" not in self:
            raise ConfigError("A cavity coupling needs cavity.omega")
        if "solver.M" in self and "solver.ES" in self:
            raise ConfigError("solver.M and solver.ES are mutually exclusive")
        if self.method in ("hf", "rdmft", "ip") and "solver.M" not in self and "solver.ES" not in self:
            raise ConfigError(f"Method {self.method} needs solver.M or solver.ES")
        if ("system.table_x" in self) != ("system.table_v" in self):
            raise ConfigError("system.table_x and system.table_v must be given together")

        if "series.variable" in self:
            variable = self["series.variable"]
            if variable not in SERIES_VARIABLES:
                raise ConfigError(f"series.variable must be one of {tuple(SERIES_VARIABLES)}, got {variable!r}")
            if variable in ("Lq", "dq", "g_over_omega") and not self.is_dressed:
                raise ConfigError(f"Series over {variable} needs a [cavity] section")
            if variable == "ES" and self.method not in ("ip", "hf", "rdmft"):
                raise ConfigError(f"Series over ES needs a basis method, got {self.method}")
            if not self.get("series.values"):
                raise ConfigError("series.values must list at least one value")

        if "scan.variable" in self:
            if self["scan.variable"] not in SCAN_VARIABLES:
                raise ConfigError(f"scan.variable must be one of {SCAN_VARIABLES}, got {self['scan.variable']!r}")
            if self["scan.variable"] == "g_over_omega" and not self.is_dressed:
                raise ConfigError("Scan over g_over_omega needs a [cavity] section")
        if "scan.values" in self and not self["scan.values"]:
            raise ConfigError("scan.values is empty")

        if self.is_dressed and abs(self["cavity.omega"] / RESONANT_OMEGA - 1.0) > 1.0:
            logger.warning(
                f"omega = {self['cavity.omega']} is far from {RESONANT_OMEGA}; "
                "the default photonic box (Lq, dq) may not be converged"
            )

    def potential(self) -> PotentialSpec:
        table = None
        if "system.table_x" in self:
            table = (tuple(map(float, self["system.table_x"])), tuple(map(float, self["system.table_v"])))
        try:
            return PotentialSpec(
                PotentialKind.parse(self["system.potential"]),
                self.get("system.softening"),
                self["system.separation"],
                self["system.stiffness"],
                table,
            )
        except Exception as err:
            raise ConfigError(f"Invalid [system] section: {err}") from err

    def modes(self) -> List[PhotonMode]:
        if not self.is_dressed:
            return []
        omega = self["cavity.omega"]
        if "cavity.g_over_omega" in self:
            lam = lambda_for(self["cavity.g_over_omega"], omega)
        else:
            lam = self.get("cavity.lambda", 0.0)
        return [PhotonMode(omega, lam) for _ in range(self["cavity.modes"])]

    def model(self) -> ModelSpec:
        try:
            return ModelSpec(
                self.potential(),
                self["system.n_electrons"],
                tuple(self.modes()),
                self["system.interaction_softening"],
                self["system.interaction"],
            )
        except ConfigError:
            raise
        except Exception as err:
            raise ConfigError(f"Invalid model: {err}") from err

    def grid(self, n_modes: Optional[int] = None) -> UniformGrid:
        """Single-particle grid: x plus one q axis per mode."""
        n_modes = len(self.modes()) if n_modes is None else n_modes
        axes = [{"L": self["grid.Lx"], "h": self["grid.dx"]}]
        axes += [{"L": self["grid.Lq"], "h": self["grid.dq"]} for _ in range(n_modes)]
        try:
            return make_grid(axes)
        except Exception as err:
            raise ConfigError(f"Invalid [grid] section: {err}") from err

    def basis_size(self) -> int:
        occupied = self["system.n_electrons"] // 2
        if "solver.M" in self:
            size = self["solver.M"]
        else:
            size = occupied + self["solver.ES"]
        if size < occupied:
            raise ConfigError(f"Basis size {size} is smaller than N/2 = {occupied}")
        return size
