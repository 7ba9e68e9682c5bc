"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  Tolerances are pinned here and nowhere else.
"""

from __future__ import annotations

import io
import time
from dataclasses import replace
from fractions import Fraction

import numpy as np

from socnavsim import kernels
from socnavsim.benchmark import run_benchmark
from socnavsim.config import ScenarioConfig
from socnavsim.dataset import collect
from socnavsim.episode import (
    Environment,
    EvalProtocol,
    RandomPolicy,
    ScriptedPolicy,
    run_evaluation,
)
from socnavsim.geometry import Vec2
from socnavsim.render import RenderSpec, render_frame
from socnavsim.sensing import SensorConfig, sense_closest, sense_occupancy, sense_raycast
from socnavsim.world import Action, Outcome, state_to_dict
from socnavsim.world import step as world_step

from .oracles import boundary_sample_distance, march_rays, occupancy_reference, random_scene
from .test_sensing import build_state


def report(name: str, ok: bool, detail: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {name}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def test_raycast_oracle():
    """100 random scenes x 360 rays within 2e-3 m of a 1e-3-step marching oracle."""
    rng = np.random.default_rng(2024)
    cfg = SensorConfig(ray_count=360, ray_max_range=5.0)
    angles = 2 * np.pi * np.arange(360) / 360
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        (ax, ay), shapes = random_scene(rng, max_humans=5, max_statics=4)
        state = build_state((ax, ay), shapes)
        fast = sense_raycast(state, cfg)
        marched = march_rays(ax, ay, angles, shapes, 5.0, step=1e-3)
        worst = max(worst, float(np.max(np.abs(fast - marched))))
    elapsed = time.perf_counter() - start
    report(
        "raycast oracle (100 scenes, 360 rays, tol 2e-3)",
        worst < 2e-3 and elapsed < 60.0,
        f"worst err {worst:.2e} m, {elapsed:.1f}s",
    )


def test_occupancy_oracle_exact():
    """100 random scenes: 60x60 grid equals the cell-center oracle exactly."""
    rng = np.random.default_rng(2025)
    cfg = SensorConfig()
    differing = 0
    for _ in range(100):
        (ax, ay), shapes = random_scene(rng, max_humans=5, max_statics=4)
        state = build_state((ax, ay), shapes)
        got = sense_occupancy(state, cfg)
        want = occupancy_reference(ax, ay, 6.0, 0.1, shapes)
        differing += int(np.sum(got != want))
    report("occupancy-grid oracle (100 scenes, exact)", differing == 0, f"{differing} differing cells")


def test_closest_obstacle_oracle():
    """100 random scenes: surface distance within 1e-3 of 1e4 boundary samples per shape."""
    rng = np.random.default_rng(2026)
    worst = 0.0
    scenes = 0
    while scenes < 100:
        (ax, ay), shapes = random_scene(rng, max_humans=5, max_statics=4)
        if not shapes:
            continue
        scenes += 1
        state = build_state((ax, ay), shapes)
        got, _ = sense_closest(state, "polar")
        want = min(boundary_sample_distance(ax, ay, s, n=10_000) for s in shapes)
        worst = max(worst, abs(got - want))
    report("closest-obstacle oracle (100 scenes, tol 1e-3)", worst < 1e-3, f"worst err {worst:.2e} m")


def test_reward_constants():
    """Terminal rewards exactly +500/-500; step penalty exactly -5; 1000+ steps."""
    config = ScenarioConfig(n_humans=5, seed=31)
    env = Environment(config)
    policy = RandomPolicy(7)
    checked = 0
    episode = 0
    ok = True
    while checked < 1000:
        _, obs = env.reset(episode)
        episode += 1
        while True:
            result = env.step(policy(obs))
            obs = result.observation
            checked += 1
            if result.terminated:
                outcome = result.info["outcome"]
                want = 500.0 if outcome == "success" else -500.0
                ok &= result.reward.total == want and result.reward.end == want
                break
            ok &= result.reward.step == -5.0
            if result.truncated:
                break
    report("reward constants (+500/-500 terminal, -5 per step)", ok, f"{checked} steps checked")


def test_accounting_identity():
    """200 random-policy episodes: return equals the per-step sum exactly; rates sum to 1."""
    config = ScenarioConfig(n_humans=5, seed=17)
    env = Environment(config)
    policy = RandomPolicy(3)
    outcomes = []
    exact = True
    for episode in range(200):
        _, obs = env.reset(episode)
        total = 0.0
        while True:
            result = env.step(policy(obs))
            obs = result.observation
            total += result.reward.total
            if result.terminated or result.truncated:
                outcomes.append(result.info["outcome"])
                break
        exact &= total == env.episode_return
    n = len(outcomes)
    rate_sum = sum((Fraction(outcomes.count(o.value), n) for o in Outcome), start=Fraction(0))
    report(
        "accounting identity (200 episodes)",
        exact and rate_sum == 1,
        f"rates sum {rate_sum}, returns exact: {exact}",
    )


def test_determinism_replay():
    """Same config/seed/actions: bit-identical states, observations, rewards, files, images."""
    config = ScenarioConfig(n_humans=5, seed=5)
    actions = None

    def run():
        env = Environment(config)
        policy = RandomPolicy(11)
        _, obs = env.reset(77)
        states, observations, rewards = [state_to_dict(env.state)], [obs], []
        for _ in range(300):
            result = env.step(policy(obs))
            obs = result.observation
            states.append(state_to_dict(env.state))
            observations.append(obs)
            rewards.append(result.reward)
            if result.terminated or result.truncated:
                break
        return states, observations, rewards

    s1, o1, r1 = run()
    s2, o2, r2 = run()
    same_traj = s1 == s2 and r1 == r2 and all(a == b for a, b in zip(o1, o2))

    ds1, ds2 = io.BytesIO(), io.BytesIO()
    collect(config, 200, 9, ds1)
    collect(config, 200, 9, ds2)
    same_dataset = ds1.getvalue() == ds2.getvalue()

    env = Environment(config)
    env.reset(77)
    img1, img2 = io.BytesIO(), io.BytesIO()
    render_frame(env.state, RenderSpec(scale=30), img1)
    render_frame(env.state, RenderSpec(scale=30), img2)
    same_image = img1.getvalue() == img2.getvalue()

    report(
        "determinism / replay (trajectories, datasets, images)",
        same_traj and same_dataset and same_image,
        f"traj={same_traj} dataset={same_dataset} image={same_image}",
    )


def test_agent_exclusion():
    """Perturbing only the agent position never changes any human's next position."""
    config = ScenarioConfig(n_humans=5, seed=23)
    rng = np.random.default_rng(99)
    violations = 0
    env = Environment(config)
    for trial in range(1000):
        state, _ = env.reset(trial)
        moved = replace(state, agent_pos=Vec2(rng.uniform(0, 10), rng.uniform(0, 10)))
        action = Action(rng.uniform(-1, 1), rng.uniform(-1, 1))
        a = world_step(state, action, config.sim)
        b = world_step(moved, action, config.sim)
        if [h.pos for h in a.humans] != [h.pos for h in b.humans]:
            violations += 1
    report("agent-exclusion property (1000 checks)", violations == 0, f"{violations} violations")


def test_scripted_agent_behavior():
    """Empty arena: >=0.95 success, mean length < 100. Five humans: >=0.60 success."""
    empty = ScenarioConfig(n_humans=0)
    rep_empty = run_evaluation(ScriptedPolicy(empty.sim), empty, 100, seed_base=0)
    crowd = ScenarioConfig(n_humans=5)
    rep_crowd = run_evaluation(ScriptedPolicy(crowd.sim), crowd, 100, seed_base=0)
    mean_len = sum(rep_empty.lengths) / len(rep_empty.lengths)
    ok = (
        rep_empty.rate(Outcome.SUCCESS) >= 0.95
        and mean_len < 100
        and rep_crowd.rate(Outcome.SUCCESS) >= 0.60
    )
    report(
        "scripted-agent behavior",
        ok,
        f"empty {rep_empty.rate(Outcome.SUCCESS):.2f} success/len {mean_len:.0f}, "
        f"crowd {rep_crowd.rate(Outcome.SUCCESS):.2f} success",
    )


def test_evaluation_schedule():
    """Checkpoints at 50..700, 20 test episodes each, 280 total, window of 10."""
    proto = EvalProtocol()
    cps = proto.checkpoints()
    ok = (
        cps == tuple(range(50, 701, 50))
        and len(cps) == 14
        and proto.eval_episodes == 20
        and proto.total_eval_episodes == 280
        and proto.window == 10
    )
    # Window statistics over a real batch use the protocol's window size.
    config = ScenarioConfig(n_humans=0, max_steps=30)
    rep = run_evaluation(RandomPolicy(1), config, 12, seed_base=0, window=proto.window)
    means, stds = rep.window_stats(Outcome.TRUNCATED)
    ok &= len(means) == 12 and len(stds) == 12
    report("evaluation schedule (14 x 20 = 280, window 10)", ok, f"checkpoints {cps[0]}..{cps[-1]}")


def test_throughput():
    """>= 5000 env steps/s single-threaded: 5 humans, 360 rays, occupancy grid on."""
    config = ScenarioConfig(
        n_humans=5,
        sensors=SensorConfig(modalities=("raycast", "occupancy"), ray_count=360),
    )
    backend = kernels.current_backend()
    result = run_benchmark(config, n_steps=5_000, seed=0, backends=(backend,))
    sps = result["backends"][backend]["steps_per_second"]
    report(
        "throughput (>= 5000 steps/s, 5 humans + 360 rays + grid)",
        sps >= 5000.0,
        f"{sps:,.0f} steps/s on {backend}",
    )
