"""Deterministic 2D social-navigation simulator and RL environment.

Force-driven pedestrians, three sensor modalities (closest obstacle,
raycast lidar, egocentric occupancy grid), dense/sparse rewards, a seeded
episode protocol, dataset collection, and rendering.  Hot kernels are
numba-compiled with a pure-numpy fallback (``SOCNAVSIM_NUMBA=0``).
"""

from .config import (
    ScenarioConfig,
    config_digest,
    config_from_dict,
    config_to_dict,
    dumps_config,
    load_config,
    loads_config,
    save_config,
)
from .episode import (
    Environment,
    EvalProtocol,
    EvalReport,
    RandomPolicy,
    ScriptedPolicy,
    StepResult,
    run_episode,
    run_evaluation,
    sample_initial_state,
)
from .errors import ConfigError, DatasetFormatError, EpisodeFinishedError, ScenarioSamplingError
from .geometry import AxisRect, Circle, Shape, Vec2
from .rewards import RewardBreakdown, RewardWeights, intermediate_reward, terminal_reward
from .sensing import Observation, SensorConfig, observe
from .world import (
    Action,
    Human,
    Outcome,
    SimParams,
    WorldState,
    check_termination,
    goal_force,
    social_force,
    state_from_dict,
    state_to_dict,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "Action",
    "AxisRect",
    "Circle",
    "ConfigError",
    "DatasetFormatError",
    "Environment",
    "EpisodeFinishedError",
    "EvalProtocol",
    "EvalReport",
    "Human",
    "Observation",
    "Outcome",
    "RandomPolicy",
    "RewardBreakdown",
    "RewardWeights",
    "ScenarioConfig",
    "ScenarioSamplingError",
    "ScriptedPolicy",
    "SensorConfig",
    "Shape",
    "SimParams",
    "StepResult",
    "Vec2",
    "WorldState",
    "check_termination",
    "config_digest",
    "config_from_dict",
    "config_to_dict",
    "dumps_config",
    "goal_force",
    "intermediate_reward",
    "load_config",
    "loads_config",
    "observe",
    "run_episode",
    "run_evaluation",
    "sample_initial_state",
    "save_config",
    "social_force",
    "state_from_dict",
    "state_to_dict",
    "step",
    "terminal_reward",
    "__version__",
]
