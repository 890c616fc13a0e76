"""Agent-based arrest/recidivism simulator with system-wide fairness metrics."""

from .bandit import BanditConfig, run_bandit
from .config import SimConfig, load_config
from .engine import (
    ArrestEvent,
    EventLog,
    SimState,
    bump_stigma,
    init_state,
    run_sim,
    step_civilians,
    step_cops,
    sweep_arrests,
)
from .errors import ConfigError, DataIntegrityError, IdentityNotApplicableError
from .justice import ClassifierSpec, adjudicate
from .metrics import MetricsReport, compute_report, fairness_indicator
from .sweep import SweepConfig, run_sweep, summarize

__version__ = "0.1.0"

__all__ = [
    "ArrestEvent",
    "BanditConfig",
    "ClassifierSpec",
    "ConfigError",
    "DataIntegrityError",
    "EventLog",
    "IdentityNotApplicableError",
    "MetricsReport",
    "SimConfig",
    "SimState",
    "SweepConfig",
    "__version__",
    "adjudicate",
    "bump_stigma",
    "compute_report",
    "fairness_indicator",
    "init_state",
    "load_config",
    "run_sim",
    "run_sweep",
    "step_civilians",
    "step_cops",
    "summarize",
    "sweep_arrests",
]
