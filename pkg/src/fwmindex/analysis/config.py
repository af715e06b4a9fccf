"""Scenario configuration: presets, overrides and their validation."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml


class ConfigError(ValueError):
    """Invalid scenario configuration (CLI exit code 2)."""


ENGINES = ("analytic", "liouville", "both")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GridSpec:
    """Probe detuning grid in units of the radiative rate."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        # normalize so a config replayed from metadata is bit-identical
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "stop", float(self.stop))
        object.__setattr__(self, "points", int(self.points))
        if not self.points >= 2:
            raise ConfigError("grid needs at least 2 points")
        if not self.stop > self.start:
            raise ConfigError("grid bounds must satisfy start < stop")

    @property
    def step(self) -> float:
        return (self.stop - self.start) / (self.points - 1)

    def to_dict(self) -> dict:
        return {"start": self.start, "stop": self.stop, "points": self.points}


# Preset parameter sets. Rates and Rabi frequencies are in units of Gamma_r
# unless the key says otherwise; ``None`` means "optimize".
PRESETS: dict[str, dict] = {
    "fig1_raman_pair": {
        "engines": ("analytic",),
        "grid": (-3.0, 3.0, 2001),
        "params": {
            "gamma": 0.5,
            "gamma_ratio": 0.5,
            "density": 1e14,
            "density_ratio": 0.1,
            "separation": 2.0,
            "population_difference": 1.0,
            "population_difference_b": -1.0,
        },
    },
    "fig3_ideal_fwm": {
        "engines": ENGINES,
        "grid": (-3.0, 3.0, 2001),
        "params": {
            "density": 1e14,
            "optical_decay": 0.5,
            "ground_decay": 1e-3,
            "control_rabi": None,
            "rabi_window": [1e-3, 10.0],
        },
    },
    "fig5_F_curves": {
        "engines": ENGINES,
        "grid": (-3.0, 3.0, 2001),
        "params": {
            "density": 1e14,
            "optical_decay": 0.5,
            "ground_decay_over_gamma": 1e-3,
            "curve_ground_decays": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            "rabi_window": [1e-3, 10.0],
            "curve_points": 200,
        },
    },
    "fig4_k40_collisional": {
        "engines": ENGINES,
        "grid": (-1.0, 1.0, 801),
        "params": {
            "density": 1e14,
            "ground_decay": 1e-3,
            "control_rabi": None,
            "rabi_window": [0.3, 10.0],
            "rabi_grid_points": 9,
            "collisional_mhz_cm3": 0.35e-13,
        },
    },
    "fig4_k40_doppler": {
        "engines": ("liouville",),
        "grid": (-3.0, 3.0, 601),
        "params": {
            "temperature": 600.0,
            "density": None,
            "ground_decay": 1e-3,
            "control_rabi": None,
            "rabi_window": [1.0, 20.0],
            "rabi_grid_points": 7,
            "collisional_mhz_cm3": 0.35e-13,
            "d2_decay_mhz": 6.035,
            "doppler_nodes": 64,
            "node_doubling": True,
            "optimize_nodes": 16,
        },
    },
    "fig6a_ideal_composite": {
        "engines": ENGINES,
        "grid": (-3.0, 3.0, 2001),
        "params": {
            "density": 1e14,
            "absorber_density_ratio": 10.0,
            "optical_decay": 0.5,
            "ground_decay": 1e-3,
            "absorber_decay": 5e-4,
            "absorber_offset": 0.1,
            "control_rabi": 0.45,
        },
    },
    "fig6c_k39_k40": {
        "engines": ("liouville",),
        "grid": (-5.0, 5.0, 1001),
        "params": {
            "tier": 1,
            "density": None,
            "absorber_density_ratio": None,
            "control_rabi": None,
            "absorber_rabi": None,
            "raman_offset": None,
            "ground_decay": 1e-3,
            "ground_relaxation": 1e-3,
            "collisional_mhz_cm3": 0.35e-13,
        },
    },
}

# Parameter tiers of the two-isotope medium: (N_40K, N_39K/N_40K, Omega_c1,2, Omega_c, delta_0)
K39_TIERS = {
    1: (1e14, 10.0, 1.3, 10.0, -0.92),
    2: (5e14, 15.0, 2.3, 20.0, -3.0),
    3: (1e15, 25.0, 4.4, 20.0, -3.0),
}


def _coerce(key: str, value, default):
    if default is None:
        if value is None:
            return None
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"override {key!r} must be a number or null") from None
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        raise ConfigError(f"override {key!r} must be a boolean")
    if isinstance(default, int):
        if isinstance(value, bool):
            raise ConfigError(f"override {key!r} must be an integer")
        try:
            f = float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"override {key!r} must be an integer") from None
        if f != int(f):
            raise ConfigError(f"override {key!r} must be an integer")
        return int(f)
    if isinstance(default, float):
        if isinstance(value, bool):
            raise ConfigError(f"override {key!r} must be a number")
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ConfigError(f"override {key!r} must be a number") from None
    if isinstance(default, list):
        if not isinstance(value, (list, tuple)):
            raise ConfigError(f"override {key!r} must be a list")
        try:
            return [float(v) for v in value]
        except (TypeError, ValueError):
            raise ConfigError(f"override {key!r} must be a list of numbers") from None
    return value


@dataclass
class ScenarioConfig:
    scenario: str
    engine: str = "analytic"
    overrides: dict = field(default_factory=dict)
    grid: GridSpec | None = None
    output: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.scenario not in PRESETS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; choose from {sorted(PRESETS)}")
        preset = PRESETS[self.scenario]
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.engine not in preset["engines"]:
            raise ConfigError(f"scenario {self.scenario} supports engines {list(preset['engines'])}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown format {self.format!r}")
        if isinstance(self.grid, dict):
            self.grid = GridSpec(float(self.grid["start"]), float(self.grid["stop"]), int(self.grid["points"]))
        if self.grid is None:
            self.grid = GridSpec(*preset["grid"])
        defaults = preset["params"]
        clean = {}
        for k, v in dict(self.overrides).items():
            if k not in defaults:
                raise ConfigError(f"scenario {self.scenario} has no parameter {k!r}")
            clean[k] = _coerce(k, v, defaults[k])
        self.overrides = clean

    def params(self) -> dict:
        out = copy.deepcopy(PRESETS[self.scenario]["params"])
        out.update(self.overrides)
        return out

    def with_overrides(self, **changes) -> "ScenarioConfig":
        ov = dict(self.overrides)
        ov.update(changes)
        return ScenarioConfig(self.scenario, self.engine, ov, self.grid, self.output, self.format)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "engine": self.engine,
            "overrides": dict(sorted(self.overrides.items())),
            "grid": self.grid.to_dict(),
            "output": self.output,
            "format": self.format,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict) or "scenario" not in data:
            raise ConfigError("config must be a mapping with a 'scenario' key")
        unknown = set(data) - {"scenario", "engine", "overrides", "grid", "output", "format"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        grid = data.get("grid")
        if grid is not None:
            try:
                grid = GridSpec(float(grid["start"]), float(grid["stop"]), int(grid["points"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad grid: {exc}") from None
        return cls(
            scenario=str(data["scenario"]),
            engine=str(data.get("engine", "analytic")),
            overrides=dict(data.get("overrides") or {}),
            grid=grid,
            output=data.get("output"),
            format=str(data.get("format", "csv")),
        )


def load_config(path) -> ScenarioConfig:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    try:
        data = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse config {p}: {exc}") from None
    return ScenarioConfig.from_dict(data)
