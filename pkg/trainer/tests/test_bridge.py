"""Env bridge: buffer shapes, clamping, and engine equivalence."""

from __future__ import annotations

import json
import subprocess
import sys

import numpy as np
import pytest

from socnavsim import (
    Action,
    ConfigError,
    Environment,
    EpisodeFinishedError,
    RandomPolicy,
    ScenarioConfig,
    SensorConfig,
    dumps_config,
    save_config,
)
from socnavtrain.bridge import make_env

CFG = ScenarioConfig(n_humans=3, seed=11)


def test_observation_spec_matches_sensor_config():
    env = make_env(dumps_config(CFG))
    assert env.observation_spec["goal"] == ((2,), np.dtype(np.float64))
    assert env.observation_spec["raycast"] == ((360,), np.dtype(np.float64))
    assert env.observation_spec["occupancy"] == ((60, 60), np.dtype(np.uint8))
    assert "closest" not in env.observation_spec

    small = ScenarioConfig(
        n_humans=1, sensors=SensorConfig(modalities=("closest",), ray_count=90)
    )
    env = make_env(dumps_config(small))
    assert set(env.observation_spec) == {"goal", "closest"}


def test_malformed_config_names_field():
    with pytest.raises(ConfigError, match="ray_count"):
        make_env(dumps_config(CFG).replace('"ray_count": 360', '"ray_count": 1'))


def test_buffers_equal_engine_observation_bitwise():
    env = make_env(dumps_config(CFG))
    direct = Environment(CFG)
    obs_map = env.reset(5)
    _, obs = direct.reset(5)
    np.testing.assert_array_equal(obs_map["raycast"], obs.raycast)
    np.testing.assert_array_equal(obs_map["occupancy"], obs.occupancy)
    assert tuple(obs_map["goal"]) == obs.goal_rel

    action = np.array([0.37, -0.81])
    obs_map2, reward, term, trunc, info = env.step(action)
    result = direct.step(Action(0.37, -0.81))
    np.testing.assert_array_equal(obs_map2["raycast"], result.observation.raycast)
    np.testing.assert_array_equal(obs_map2["occupancy"], result.observation.occupancy)
    assert reward == result.reward.total
    assert (term, trunc) == (result.terminated, result.truncated)
    assert info["reward_breakdown"] == result.info["reward_breakdown"]


def test_out_of_range_actions_clamp():
    a = make_env(dumps_config(CFG))
    b = make_env(dumps_config(CFG))
    a.reset(3)
    b.reset(3)
    obs_a, ra, *_ = a.step([2.0, -9.0])
    obs_b, rb, *_ = b.step([1.0, -1.0])
    assert ra == rb
    np.testing.assert_array_equal(obs_a["raycast"], obs_b["raycast"])


def test_non_finite_action_rejected():
    env = make_env(dumps_config(CFG))
    env.reset(0)
    with pytest.raises(ValueError, match="finite"):
        env.step([float("nan"), 0.0])


def test_step_after_done_mirrors_engine_error():
    cfg = ScenarioConfig(n_humans=0, max_steps=1)
    env = make_env(dumps_config(cfg))
    env.reset(0)
    env.step([0.0, 0.0])
    with pytest.raises(EpisodeFinishedError):
        env.step([0.0, 0.0])


def test_per_step_rewards_match_engine_replay():
    """Bridge and direct engine produce identical per-step reward totals."""
    env = make_env(dumps_config(CFG))
    direct = Environment(CFG)
    policy = RandomPolicy(9)
    policy_mirror = RandomPolicy(9)

    obs_map = env.reset(21)
    _, obs = direct.reset(21)
    while True:
        action = policy(obs)
        _, reward, term, trunc, _ = env.step([action.vx, action.vy])
        result = direct.step(policy_mirror(obs))
        obs = result.observation
        assert reward == result.reward.total
        assert (term, trunc) == (result.terminated, result.truncated)
        if term or trunc:
            break
    assert env.episode_return == direct.episode_return


def test_cross_interface_replay_against_cli(tmp_path):
    """The CLI `simulate` and the bridge agree on a random-policy episode."""
    cfg_path = tmp_path / "cfg.json"
    save_config(CFG, cfg_path)
    proc = subprocess.run(
        [sys.executable, "-m", "socnavsim.cli", "simulate", "--config", str(cfg_path),
         "--seed", "5", "--policy", "random"],
        capture_output=True,
        text=True,
        check=True,
    )
    cli = json.loads(proc.stdout)

    # RandomPolicy ignores the observation, so the bridge can replay the
    # exact action stream the CLI consumed.
    env = make_env(dumps_config(CFG))
    policy = RandomPolicy(5)
    env.reset(5)
    steps = 0
    outcome = None
    while True:
        a = policy(None)
        _, _, term, trunc, info = env.step([a.vx, a.vy])
        steps += 1
        if term or trunc:
            outcome = info["outcome"]
            break
    assert steps == cli["steps"]
    assert outcome == cli["outcome"]
    assert env.episode_return == pytest.approx(cli["return"], abs=1e-12)
