"""Training protocol: interleaved evaluation, learning-curve tables, plots.

A run trains for ``train_episodes`` episodes, pausing every ``eval_every``
to roll ``eval_episodes`` greedy episodes on evaluation-namespace seeds.
Evaluation transitions never reach the agent (nothing is observed or
stored), so the replay buffer stays free of test data by construction.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from socnavsim import EvalProtocol, Outcome, ScenarioConfig

from .agents import BaseAgent, build_agent
from .bridge import EnvHandle

METRICS = tuple(o.value for o in Outcome)

# Keeps the train-episode seed blocks of distinct runs from overlapping.
RUN_SEED_STRIDE = 10_000_000


@dataclass(frozen=True)
class TrainProtocol:
    train_episodes: int = 700
    eval_every: int = 50
    eval_episodes: int = 20
    window: int = 10
    runs: int = 5
    encoder_regime: str = "scratch"

    def schedule(self) -> EvalProtocol:
        return EvalProtocol(
            train_episodes=self.train_episodes,
            eval_every=self.eval_every,
            eval_episodes=self.eval_episodes,
            window=self.window,
            runs=self.runs,
        )


def rollout(env: EnvHandle, agent: BaseAgent, episode_seed: int, namespace: str, learn: bool):
    """One episode; returns (outcome, steps, return). learn=False is greedy
    and leaves the agent untouched."""
    obs = env.reset(episode_seed, namespace)
    steps = 0
    while True:
        action = agent.act(obs, deterministic=not learn)
        next_obs, reward, terminated, truncated, info = env.step(action)
        if learn:
            agent.observe(obs, action, reward, next_obs, terminated, truncated)
        obs = next_obs
        steps += 1
        if terminated or truncated:
            return info["outcome"], steps, env.episode_return


def _window_stats(flags: np.ndarray, window: int) -> tuple[float, float]:
    tail = flags[-window:]
    return float(tail.mean()), float(tail.std())


def train_run(
    config: ScenarioConfig,
    paradigm: str,
    protocol: TrainProtocol,
    run_index: int = 0,
    seed: int = 0,
    pretrained: dict | None = None,
    encoder_spec=None,
    hp=None,
    verbose: bool = False,
) -> dict:
    """One full training run; returns its learning-curve table."""
    env = EnvHandle(config)
    agent = build_agent(
        paradigm,
        config,
        env.observation_spec,
        regime=protocol.encoder_regime,
        encoder_spec=encoder_spec,
        pretrained=pretrained,
        hp=hp,
        seed=seed + run_index,
    )
    schedule = protocol.schedule()
    run_offset = (seed + run_index) * RUN_SEED_STRIDE

    eval_outcomes: list[str] = []
    checkpoints: list[dict] = []
    for episode in range(1, protocol.train_episodes + 1):
        rollout(env, agent, run_offset + episode, "train", learn=True)
        if episode % protocol.eval_every != 0:
            continue
        ci = episode // protocol.eval_every - 1
        batch: list[str] = []
        for j in range(protocol.eval_episodes):
            outcome, _, _ = rollout(
                env, agent, schedule.eval_seed(run_index, ci, j), "eval", learn=False
            )
            batch.append(outcome)
        eval_outcomes.extend(batch)
        row = {"episode": episode, "counts": {}, "rates": {}, "window_mean": {}, "window_std": {}}
        for metric in METRICS:
            flags = np.array([1.0 if o == metric else 0.0 for o in eval_outcomes])
            row["counts"][metric] = batch.count(metric)
            row["rates"][metric] = batch.count(metric) / len(batch)
            mean, std = _window_stats(flags, protocol.window)
            row["window_mean"][metric] = mean
            row["window_std"][metric] = std
        checkpoints.append(row)
        if verbose:
            print(
                f"[{paradigm}/run{run_index}] episode {episode}: "
                + " ".join(f"{m}={row['rates'][m]:.2f}" for m in METRICS),
                file=sys.stderr,
                flush=True,
            )

    return {
        "version": 1,
        "paradigm": paradigm,
        "regime": protocol.encoder_regime,
        "run_index": run_index,
        "seed": seed + run_index,
        "train_episodes": protocol.train_episodes,
        "eval_every": protocol.eval_every,
        "eval_episodes": protocol.eval_episodes,
        "window": protocol.window,
        "env_steps": agent.total_env_steps,
        "updates": agent.updates_done,
        "checkpoints": checkpoints,
        "eval_outcomes": eval_outcomes,
    }


def train(
    config: ScenarioConfig,
    paradigm: str,
    protocol: TrainProtocol,
    seed: int = 0,
    pretrained: dict | None = None,
    encoder_spec=None,
    hp=None,
    verbose: bool = False,
) -> list[dict]:
    """All protocol runs sequentially; one table per run."""
    return [
        train_run(
            config,
            paradigm,
            protocol,
            run_index=r,
            seed=seed,
            pretrained=pretrained,
            encoder_spec=encoder_spec,
            hp=hp,
            verbose=verbose,
        )
        for r in range(protocol.runs)
    ]


def aggregate_runs(tables: list[dict]) -> dict:
    """Mean/std over runs, per checkpoint and metric (both raw batch rates
    and the sliding-window statistics)."""
    if not tables:
        raise ValueError("no run tables to aggregate")
    if len({t["paradigm"] for t in tables}) > 1:
        raise ValueError("refusing to aggregate runs from different paradigms")
    episodes = [row["episode"] for row in tables[0]["checkpoints"]]
    for t in tables:
        if [row["episode"] for row in t["checkpoints"]] != episodes:
            raise ValueError("run tables disagree on the checkpoint schedule")
    out = {
        "version": 1,
        "paradigm": tables[0]["paradigm"],
        "regime": tables[0]["regime"],
        "runs": len(tables),
        "episodes": episodes,
        "metrics": {},
    }
    for metric in METRICS:
        rates = np.array([[row["rates"][metric] for row in t["checkpoints"]] for t in tables])
        wmean = np.array([[row["window_mean"][metric] for row in t["checkpoints"]] for t in tables])
        out["metrics"][metric] = {
            "rate_mean": rates.mean(axis=0).tolist(),
            "rate_std": rates.std(axis=0).tolist(),
            "window_mean": wmean.mean(axis=0).tolist(),
            "window_std": wmean.std(axis=0).tolist(),
        }
    return out


def plot_curves(aggregates: dict[str, dict], path: str | Path) -> None:
    """Three panels (success/collision/truncated rate vs training episode),
    one mean +- std band per labeled aggregate."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6), sharey=True)
    for ax, metric in zip(axes, METRICS):
        for label, agg in aggregates.items():
            x = agg["episodes"]
            mean = np.array(agg["metrics"][metric]["rate_mean"])
            std = np.array(agg["metrics"][metric]["rate_std"])
            ax.plot(x, mean, label=label)
            ax.fill_between(x, mean - std, mean + std, alpha=0.25)
        ax.set_title(f"{metric} rate")
        ax.set_xlabel("training episode")
        ax.set_ylim(-0.05, 1.05)
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("rate")
    axes[0].legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_table(table: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(table, indent=2) + "\n")


def load_table(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
