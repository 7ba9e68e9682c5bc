"""Episode lifecycle: reset sampling, the step contract, policies, evaluation.

Episode seeds live in disjoint namespaces ("train", "eval", "data"): the
namespace tag is mixed into the generator seed, so evaluation episodes can
never collide with training ones no matter which integers a caller picks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import world
from .config import ScenarioConfig
from .errors import EpisodeFinishedError
from .geometry import Vec2
from .rewards import RewardBreakdown, intermediate_reward, terminal_reward
from .sensing import Observation, observe
from .world import Action, Human, Outcome, WorldState, sample_free_point

SEED_NAMESPACES = {"train": 0, "eval": 1, "data": 2}

MIN_START_GOAL_DIST = 3.0

Policy = Callable[[Observation], Action]


@dataclass(frozen=True)
class StepResult:
    observation: Observation
    reward: RewardBreakdown
    terminated: bool
    truncated: bool
    info: dict


def _episode_rng(config: ScenarioConfig, episode_seed: int, namespace: str):
    if namespace not in SEED_NAMESPACES:
        raise ValueError(f"unknown seed namespace {namespace!r}; valid: {sorted(SEED_NAMESPACES)}")
    mask = 0xFFFFFFFFFFFFFFFF
    seq = np.random.SeedSequence(
        [config.seed & mask, SEED_NAMESPACES[namespace], episode_seed & mask]
    )
    bit_gen = np.random.PCG64(seq)
    return np.random.Generator(bit_gen), bit_gen


def sample_initial_state(
    config: ScenarioConfig, episode_seed: int, namespace: str = "train"
) -> WorldState:
    """Draw agent start/goal and human starts/goals over free space.

    Start and goal are at least MIN_START_GOAL_DIST apart; nothing spawns
    overlapping anything else.  Fully determined by (config.seed, namespace,
    episode_seed).
    """
    rng, bit_gen = _episode_rng(config, episode_seed, namespace)
    statics = config.static_obstacles
    arena = config.arena

    agent_pos = sample_free_point(
        rng, arena, statics, edge_margin=config.agent_radius, static_margin=config.agent_radius
    )
    agent_goal = sample_free_point(
        rng,
        arena,
        statics,
        static_margin=config.agent_radius,
        keep_away=((agent_pos, MIN_START_GOAL_DIST),),
    )

    humans = []
    occupied: list[tuple[Vec2, float]] = [(agent_pos, config.agent_radius + config.human_radius)]
    for _ in range(config.n_humans):
        pos = sample_free_point(
            rng,
            arena,
            statics,
            edge_margin=config.human_radius,
            static_margin=config.human_radius,
            keep_away=tuple(occupied),
        )
        occupied.append((pos, 2.0 * config.human_radius))
        goal = sample_free_point(rng, arena, statics, static_margin=config.human_radius)
        humans.append(Human(pos, config.human_radius, goal, config.sim.human_max_speed))

    return WorldState(
        arena=arena,
        agent_pos=agent_pos,
        agent_radius=config.agent_radius,
        agent_goal=agent_goal,
        goal_radius=config.goal_radius,
        humans=tuple(humans),
        static_obstacles=statics,
        step_index=0,
        rng_state=bit_gen.state,
    )


class Environment:
    """One episodic environment instance; not shareable across threads."""

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self._state: Optional[WorldState] = None
        self._ended = True
        self._episode_return = 0.0

    @property
    def state(self) -> WorldState:
        if self._state is None:
            raise EpisodeFinishedError("environment has not been reset")
        return self._state

    @property
    def episode_return(self) -> float:
        return self._episode_return

    def reset(self, episode_seed: int, namespace: str = "train") -> tuple[WorldState, Observation]:
        self._state = sample_initial_state(self.config, episode_seed, namespace)
        self._ended = False
        self._episode_return = 0.0
        return self._state, observe(self._state, self.config.sensors)

    def step(self, action: Action) -> StepResult:
        if self._state is None or self._ended:
            raise EpisodeFinishedError("step() called on a finished episode; reset() first")
        prev_pos = self._state.agent_pos
        state = world.step(self._state, action, self.config.sim)
        outcome = world.check_termination(state)

        terminated = outcome is not None
        truncated = False
        if terminated:
            reward = terminal_reward(outcome, self.config.rewards)
        else:
            reward = intermediate_reward(
                prev_pos,
                state.agent_pos,
                state.agent_goal,
                tuple(h.pos for h in state.humans),
                self.config.rewards,
                self.config.sim,
            )
            if state.step_index >= self.config.max_steps:
                truncated = True
                outcome = Outcome.TRUNCATED

        self._state = state
        self._ended = terminated or truncated
        self._episode_return += reward.total

        info = {"reward_breakdown": reward.as_dict()}
        if outcome is not None:
            info["outcome"] = outcome.value
        return StepResult(
            observation=observe(state, self.config.sensors),
            reward=reward,
            terminated=terminated,
            truncated=truncated,
            info=info,
        )


@dataclass
class EpisodeSummary:
    outcome: Outcome
    steps: int
    episode_return: float


def run_episode(
    env: Environment, policy: Policy, episode_seed: int, namespace: str = "train"
) -> EpisodeSummary:
    _, obs = env.reset(episode_seed, namespace)
    steps = 0
    while True:
        result = env.step(policy(obs))
        obs = result.observation
        steps += 1
        if result.terminated or result.truncated:
            return EpisodeSummary(
                outcome=Outcome(result.info["outcome"]),
                steps=steps,
                episode_return=env.episode_return,
            )


class ScriptedPolicy:
    """Potential-field baseline: goal attraction plus sensed-obstacle repulsion.

    Needs the relative goal and either the raycast or the closest-obstacle
    modality; repulsion pushes directly away from the nearest sensed surface
    with a linear ramp inside ``repulse_radius``.
    """

    def __init__(
        self,
        params: world.SimParams,
        repulse_radius: float = 1.5,
        repulse_gain: float = 2.0,
        closest_format: str = "polar",
    ):
        self.params = params
        self.repulse_radius = repulse_radius
        self.repulse_gain = repulse_gain
        self.closest_format = closest_format

    def _nearest_obstacle(self, obs: Observation) -> Optional[tuple[float, float]]:
        """(distance, world bearing) of the nearest sensed surface, if any."""
        if obs.closest is not None:
            a, b = obs.closest
            if self.closest_format == "cartesian":
                return (math.hypot(a, b), math.atan2(b, a))
            return (a, b)
        if obs.raycast is not None:
            k = int(np.argmin(obs.raycast))
            return (float(obs.raycast[k]), 2.0 * math.pi * k / len(obs.raycast))
        return None

    def __call__(self, obs: Observation) -> Action:
        dist, angle = obs.goal_rel
        mag = min(dist / self.params.goal_sat_dist, 1.0)
        ax = mag * math.cos(angle)
        ay = mag * math.sin(angle)

        nearest = self._nearest_obstacle(obs)
        if nearest is not None:
            od, oa = nearest
            if od < self.repulse_radius:
                push = self.repulse_gain * (self.repulse_radius - od) / self.repulse_radius
                ax -= push * math.cos(oa)
                ay -= push * math.sin(oa)

        if dist == 0.0:
            return Action(0.0, 0.0)
        return Action(min(max(ax, -1.0), 1.0), min(max(ay, -1.0), 1.0))


class RandomPolicy:
    """Uniform actions on [-1, 1]^2 from a private seeded generator."""

    def __init__(self, seed: int):
        self._rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed & 0xFFFFFFFFFFFFFFFF)))

    def __call__(self, obs: Observation) -> Action:
        vx, vy = self._rng.uniform(-1.0, 1.0, 2)
        return Action(vx, vy)


@dataclass
class EvalReport:
    """Outcome tallies for one batch of evaluation episodes."""

    outcomes: list[str]
    returns: list[float]
    lengths: list[int]
    window: int = 10

    @property
    def episodes(self) -> int:
        return len(self.outcomes)

    def count(self, outcome: Outcome) -> int:
        return self.outcomes.count(outcome.value)

    def rate(self, outcome: Outcome) -> float:
        return self.count(outcome) / self.episodes

    def rates_sum_to_one_exactly(self) -> bool:
        total = sum(
            (Fraction(self.count(o), self.episodes) for o in Outcome), start=Fraction(0)
        )
        return total == 1

    def window_stats(self, outcome: Outcome) -> tuple[list[float], list[float]]:
        """Sliding mean/std of the outcome indicator over the last `window` episodes."""
        flags = np.array([1.0 if o == outcome.value else 0.0 for o in self.outcomes])
        means, stds = [], []
        for i in range(len(flags)):
            chunk = flags[max(0, i - self.window + 1) : i + 1]
            means.append(float(chunk.mean()))
            stds.append(float(chunk.std()))
        return means, stds

    def to_dict(self) -> dict:
        data = {
            "version": 1,
            "episodes": self.episodes,
            "counts": {o.value: self.count(o) for o in Outcome},
            "rates": {o.value: self.rate(o) for o in Outcome},
            "mean_return": float(np.mean(self.returns)) if self.returns else 0.0,
            "mean_length": float(np.mean(self.lengths)) if self.lengths else 0.0,
            "outcomes": list(self.outcomes),
            "returns": list(self.returns),
            "lengths": list(self.lengths),
            "window": {"size": self.window},
        }
        for o in Outcome:
            means, stds = self.window_stats(o)
            data["window"][f"{o.value}_mean"] = means
            data["window"][f"{o.value}_std"] = stds
        return data


def run_evaluation(
    policy: Policy,
    config: ScenarioConfig,
    n_episodes: int,
    seed_base: int,
    namespace: str = "eval",
    window: int = 10,
) -> EvalReport:
    """Run seeded episodes seed_base..seed_base+n-1 and tally outcome rates."""
    if n_episodes < 1:
        raise ValueError(f"n_episodes must be >= 1, got {n_episodes}")
    env = Environment(config)
    outcomes, returns, lengths = [], [], []
    for i in range(n_episodes):
        summary = run_episode(env, policy, seed_base + i, namespace)
        outcomes.append(summary.outcome.value)
        returns.append(summary.episode_return)
        lengths.append(summary.steps)
    return EvalReport(outcomes=outcomes, returns=returns, lengths=lengths, window=window)


@dataclass(frozen=True)
class EvalProtocol:
    """Evaluation cadence: test batches interleaved with training episodes."""

    train_episodes: int = 700
    eval_every: int = 50
    eval_episodes: int = 20
    window: int = 10
    runs: int = 5

    def __post_init__(self):
        if self.train_episodes % self.eval_every != 0:
            raise ValueError("train_episodes must be a multiple of eval_every")

    def checkpoints(self) -> tuple[int, ...]:
        return tuple(
            range(self.eval_every, self.train_episodes + 1, self.eval_every)
        )

    @property
    def total_eval_episodes(self) -> int:
        return len(self.checkpoints()) * self.eval_episodes

    def eval_seed(self, run: int, checkpoint_index: int, episode_index: int) -> int:
        """Globally unique evaluation episode seed (the namespace adds the
        train/eval separation; this keeps batches distinct within a run)."""
        if not 0 <= episode_index < self.eval_episodes:
            raise ValueError("episode_index out of range")
        per_run = len(self.checkpoints()) * self.eval_episodes
        return run * per_run + checkpoint_index * self.eval_episodes + episode_index
