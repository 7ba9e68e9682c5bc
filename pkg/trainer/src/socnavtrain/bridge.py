"""In-process bridge from the simulator engine to the training loops.

An :class:`EnvHandle` is built from the same JSON config text the engine
CLI accepts and speaks the standard episodic protocol: ``reset`` and
``step`` return named observation buffers (one numpy array per enabled
modality plus the relative goal) alongside reward, terminated/truncated
flags, and an info map carrying the reward breakdown and final outcome.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from socnavsim import Environment, ScenarioConfig, loads_config
from socnavsim.sensing import Observation
from socnavsim.world import Action


def _obs_map(obs: Observation) -> dict[str, np.ndarray]:
    out = {"goal": np.array(obs.goal_rel, dtype=np.float64)}
    if obs.closest is not None:
        out["closest"] = np.array(obs.closest, dtype=np.float64)
    if obs.raycast is not None:
        out["raycast"] = np.asarray(obs.raycast, dtype=np.float64)
    if obs.occupancy is not None:
        out["occupancy"] = np.asarray(obs.occupancy, dtype=np.uint8)
    return out


class EnvHandle:
    """One environment instance; use from a single thread at a time."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self._env = Environment(config)
        cells = config.sensors.grid_cells
        spec: dict[str, tuple[tuple[int, ...], np.dtype]] = {
            "goal": ((2,), np.dtype(np.float64))
        }
        if "closest" in config.sensors.modalities:
            spec["closest"] = ((2,), np.dtype(np.float64))
        if "raycast" in config.sensors.modalities:
            spec["raycast"] = ((config.sensors.ray_count,), np.dtype(np.float64))
        if "occupancy" in config.sensors.modalities:
            spec["occupancy"] = ((cells, cells), np.dtype(np.uint8))
        self.observation_spec = spec

    @property
    def action_dim(self) -> int:
        return 2

    def reset(self, seed: int, namespace: str = "train") -> dict[str, np.ndarray]:
        _, obs = self._env.reset(seed, namespace)
        return _obs_map(obs)

    def step(self, action) -> tuple[dict[str, np.ndarray], float, bool, bool, dict]:
        vx, vy = np.asarray(action, dtype=np.float64).reshape(2)
        result = self._env.step(Action(float(vx), float(vy)))
        return (
            _obs_map(result.observation),
            result.reward.total,
            result.terminated,
            result.truncated,
            dict(result.info),
        )

    @property
    def episode_return(self) -> float:
        return self._env.episode_return


def make_env(config_text: str) -> EnvHandle:
    """Build a handle from config JSON text (same schema as the engine CLI)."""
    return EnvHandle(loads_config(config_text))


def make_env_from_file(path: str | Path) -> EnvHandle:
    return make_env(Path(path).read_text())
