"""Scenario loading, execution and result emission."""

from .config import ScenarioConfig, build_config, load_config
from .emit import SweepResult, emit, write
from .runner import run_scenario

__all__ = ["ScenarioConfig", "SweepResult", "build_config", "emit", "load_config", "run_scenario", "write"]
