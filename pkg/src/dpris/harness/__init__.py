"""Config-driven reproduction of the capacity and threshold experiments."""

from .experiments import run_power_sweep, run_size_sweep, run_threshold_sweep
from .spec import ExperimentKind, ExperimentSpec, load_config, load_system
