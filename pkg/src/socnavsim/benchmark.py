"""Step-throughput benchmark across kernel backends.

Runs the same seeded random-policy rollout on each backend and reports
environment steps per second, so the numba speedup over the numpy
fallback is measurable on the actual hot path.
"""

from __future__ import annotations

import time

from . import kernels
from .config import ScenarioConfig
from .episode import Environment, RandomPolicy


def _run_steps(config: ScenarioConfig, n_steps: int, seed: int) -> float:
    """Steps/second over n_steps of auto-resetting random-policy stepping."""
    env = Environment(config)
    policy = RandomPolicy(seed)
    episode = 0
    _, obs = env.reset(episode)
    start = time.perf_counter()
    for _ in range(n_steps):
        result = env.step(policy(obs))
        obs = result.observation
        if result.terminated or result.truncated:
            episode += 1
            _, obs = env.reset(episode)
    elapsed = time.perf_counter() - start
    return n_steps / elapsed


def run_benchmark(
    config: ScenarioConfig | None = None,
    n_steps: int = 5_000,
    seed: int = 0,
    backends: tuple[str, ...] | None = None,
) -> dict:
    """Compare steps/second per backend; restores the active backend after."""
    if config is None:
        config = ScenarioConfig()
    if backends is None:
        backends = kernels.available_backends()

    results: dict = {
        "steps": n_steps,
        "n_humans": config.n_humans,
        "modalities": list(config.sensors.modalities),
        "backends": {},
    }
    previous = kernels.current_backend()
    try:
        for name in backends:
            kernels.use_backend(name)
            if name == "numba":
                kernels.warmup()  # JIT compile outside the timed region
            _run_steps(config, min(200, n_steps), seed)  # cache warm-up lap
            results["backends"][name] = {"steps_per_second": _run_steps(config, n_steps, seed)}
    finally:
        kernels.use_backend(previous)

    if "numba" in results["backends"] and "numpy" in results["backends"]:
        results["speedup_numba_over_numpy"] = (
            results["backends"]["numba"]["steps_per_second"]
            / results["backends"]["numpy"]["steps_per_second"]
        )
    return results
