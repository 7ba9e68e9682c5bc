"""Command-line entry points: simulate, collect, evaluate, benchmark.

Every command is deterministic given its flags, emits a single JSON object
on stdout, and exits nonzero with a diagnostic on stderr for bad inputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .benchmark import run_benchmark
from .config import ScenarioConfig, load_config
from .dataset import collect
from .episode import Environment, RandomPolicy, ScriptedPolicy, run_evaluation
from .errors import ConfigError, ScenarioSamplingError
from .render import RenderSpec, render_frame
from .world import Outcome, state_to_dict


def _load(config_path: str) -> ScenarioConfig:
    path = Path(config_path)
    if not path.is_file():
        raise ConfigError("config", f"no such file: {path}")
    return load_config(path)


def _make_policy(name: str, config: ScenarioConfig, seed: int):
    if name == "scripted":
        return ScriptedPolicy(config.sim, closest_format=config.sensors.closest_format)
    if name == "random":
        return RandomPolicy(seed)
    raise ConfigError("policy", f"unknown policy {name!r}")


def _emit(data: dict) -> None:
    print(json.dumps(data, sort_keys=True))


def cmd_simulate(args: argparse.Namespace) -> int:
    config = _load(args.config)
    policy = _make_policy(args.policy, config, args.seed)
    render_dir = None
    spec = None
    if args.render_dir:
        spec = RenderSpec(stride=args.render_stride, scale=args.render_scale)
        render_dir = Path(args.render_dir)
        render_dir.mkdir(parents=True, exist_ok=True)

    env = Environment(config)
    state, obs = env.reset(args.seed)

    def maybe_render(step_idx: int):
        if render_dir is not None and step_idx % spec.stride == 0:
            with open(render_dir / f"frame_{step_idx:06d}.ppm", "wb") as f:
                render_frame(env.state, spec, f)

    maybe_render(0)
    steps = 0
    outcome = Outcome.TRUNCATED.value  # reported when the step cap cuts the run short
    while args.steps is None or steps < args.steps:
        result = env.step(policy(obs))
        obs = result.observation
        steps += 1
        maybe_render(steps)
        if result.terminated or result.truncated:
            outcome = result.info["outcome"]
            break

    if args.dump_state:
        Path(args.dump_state).write_text(json.dumps(state_to_dict(env.state), indent=2) + "\n")

    _emit(
        {
            "outcome": outcome,
            "steps": steps,
            "return": env.episode_return,
            "seed": args.seed,
            "policy": args.policy,
        }
    )
    return 0


def cmd_collect(args: argparse.Namespace) -> int:
    config = _load(args.config)
    out = Path(args.out)
    with open(out, "wb") as sink:
        n = collect(config, args.samples, args.seed, sink)
    digest = hashlib.sha256(out.read_bytes()).hexdigest()
    _emit({"samples": n, "bytes": out.stat().st_size, "sha256": digest, "path": str(out)})
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    config = _load(args.config)
    policy = _make_policy(args.policy, config, args.seed)
    report = run_evaluation(policy, config, args.episodes, seed_base=args.seed)
    if args.report:
        Path(args.report).write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    _emit(
        {
            "episodes": report.episodes,
            "success_rate": report.rate(Outcome.SUCCESS),
            "collision_rate": report.rate(Outcome.COLLISION),
            "truncated_rate": report.rate(Outcome.TRUNCATED),
            "mean_return": float(sum(report.returns) / len(report.returns)),
            "mean_length": float(sum(report.lengths) / len(report.lengths)),
        }
    )
    return 0


def cmd_benchmark(args: argparse.Namespace) -> int:
    config = _load(args.config) if args.config else ScenarioConfig()
    _emit(run_benchmark(config, n_steps=args.steps, seed=args.seed))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="socnavsim",
        description="Deterministic 2D social-navigation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one episode and print its summary")
    p.add_argument("--config", required=True, help="scenario config JSON")
    p.add_argument("--seed", type=int, default=0, help="episode seed")
    p.add_argument("--steps", type=int, default=None, help="hard cap on steps for this run")
    p.add_argument("--policy", choices=("scripted", "random"), default="scripted")
    p.add_argument("--dump-state", default=None, metavar="PATH", help="write final world snapshot")
    p.add_argument("--render-dir", default=None, metavar="DIR", help="write P6 frames here")
    p.add_argument("--render-stride", type=int, default=1)
    p.add_argument("--render-scale", type=int, default=50, help="pixels per meter")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("collect", help="collect an occupancy-grid dataset")
    p.add_argument("--config", required=True)
    p.add_argument("--samples", type=int, default=50_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output dataset path")
    p.set_defaults(func=cmd_collect)

    p = sub.add_parser("evaluate", help="run evaluation episodes and report outcome rates")
    p.add_argument("--config", required=True)
    p.add_argument("--episodes", type=int, default=20)
    p.add_argument("--policy", choices=("scripted", "random"), default="scripted")
    p.add_argument("--seed", type=int, default=0, help="evaluation seed base")
    p.add_argument("--report", default=None, metavar="PATH", help="write the full report JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("benchmark", help="compare kernel backends on step throughput")
    p.add_argument("--config", default=None)
    p.add_argument("--steps", type=int, default=5_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_benchmark)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ScenarioSamplingError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
