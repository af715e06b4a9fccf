"""Scenario runner behind the command line interface."""

from .config import ConfigError, GridSpec, PRESETS, ScenarioConfig, load_config
from .scenarios import ScenarioFailure, run_scenario
from .spectrum import (
    GainCheck,
    SpectrumResult,
    ZeroCrossing,
    check_no_nearby_gain,
    emit,
    find_zero_absorption,
    parse,
)
