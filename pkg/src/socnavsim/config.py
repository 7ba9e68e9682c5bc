"""Scenario configuration: a versioned JSON schema with strict validation.

Every tunable of a run lives here (arena, humans, obstacles, physics,
sensors, reward weights, seed), so one file pins a scenario completely.
Unknown keys are rejected to catch typos early; every error names the
offending field by dotted path.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .geometry import Circle, Shape, shape_from_dict, shape_to_dict
from .rewards import RewardWeights
from .sensing import SensorConfig
from .world import SimParams

CONFIG_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ScenarioConfig:
    arena: tuple[float, float] = (10.0, 10.0)
    n_humans: int = 5
    static_obstacles: tuple[Shape, ...] = ()
    sim: SimParams = field(default_factory=SimParams)
    sensors: SensorConfig = field(default_factory=SensorConfig)
    rewards: RewardWeights = field(default_factory=RewardWeights)
    agent_radius: float = 0.3
    human_radius: float = 0.3
    goal_radius: float = 0.3
    max_steps: int = 200
    seed: int = 0

    def __post_init__(self):
        w, h = self.arena
        if not (w > 0 and h > 0):
            raise ConfigError("arena", f"dimensions must be > 0, got {self.arena}")
        if self.n_humans < 0:
            raise ConfigError("n_humans", f"must be >= 0, got {self.n_humans}")
        for name in ("agent_radius", "human_radius", "goal_radius"):
            if getattr(self, name) <= 0:
                raise ConfigError(name, f"must be > 0, got {getattr(self, name)}")
        if self.max_steps < 1:
            raise ConfigError("max_steps", f"must be >= 1, got {self.max_steps}")
        covered = 0.0
        for i, shape in enumerate(self.static_obstacles):
            if isinstance(shape, Circle):
                x0, x1 = shape.center.x - shape.radius, shape.center.x + shape.radius
                y0, y1 = shape.center.y - shape.radius, shape.center.y + shape.radius
                covered += (2 * shape.radius) ** 2
            else:
                x0, x1 = shape.center.x - shape.half_extents.x, shape.center.x + shape.half_extents.x
                y0, y1 = shape.center.y - shape.half_extents.y, shape.center.y + shape.half_extents.y
                covered += 4 * shape.half_extents.x * shape.half_extents.y
            if x0 < 0 or y0 < 0 or x1 > w or y1 > h:
                raise ConfigError(
                    f"static_obstacles[{i}]", f"must lie within the {w}x{h} arena"
                )
        if covered >= w * h:
            raise ConfigError("static_obstacles", "obstacles cover the whole arena")


def _require_keys(data: dict, allowed: set[str], path: str) -> None:
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(path or "config", f"unknown keys {sorted(unknown)}")


def _build_section(cls, data: dict, path: str, transform=None):
    names = {f.name for f in fields(cls)}
    _require_keys(data, names, path)
    kwargs = dict(data)
    if transform:
        kwargs = transform(kwargs)
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from exc


def config_from_dict(data: dict) -> ScenarioConfig:
    if not isinstance(data, dict):
        raise ConfigError("config", f"expected a JSON object, got {type(data).__name__}")
    version = data.get("version", CONFIG_SCHEMA_VERSION)
    if version != CONFIG_SCHEMA_VERSION:
        raise ConfigError("version", f"unsupported config version {version!r}")

    top_allowed = {
        "version",
        "arena",
        "n_humans",
        "static_obstacles",
        "sim",
        "sensors",
        "rewards",
        "agent_radius",
        "human_radius",
        "goal_radius",
        "max_steps",
        "seed",
    }
    _require_keys(data, top_allowed, "")

    kwargs: dict = {}
    if "arena" in data:
        arena = data["arena"]
        if not (isinstance(arena, (list, tuple)) and len(arena) == 2):
            raise ConfigError("arena", "expected [width, height]")
        kwargs["arena"] = (float(arena[0]), float(arena[1]))
    for name in ("n_humans", "max_steps", "seed"):
        if name in data:
            if not isinstance(data[name], int):
                raise ConfigError(name, f"expected an integer, got {data[name]!r}")
            kwargs[name] = data[name]
    for name in ("agent_radius", "human_radius", "goal_radius"):
        if name in data:
            kwargs[name] = float(data[name])
    if "static_obstacles" in data:
        shapes = []
        for i, blob in enumerate(data["static_obstacles"]):
            try:
                shapes.append(shape_from_dict(blob))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"static_obstacles[{i}]", str(exc)) from exc
        kwargs["static_obstacles"] = tuple(shapes)
    if "sim" in data:
        kwargs["sim"] = _build_section(SimParams, data["sim"], "sim")
    if "sensors" in data:
        kwargs["sensors"] = _build_section(
            SensorConfig,
            data["sensors"],
            "sensors",
            transform=lambda kw: {
                **kw,
                **({"modalities": tuple(kw["modalities"])} if "modalities" in kw else {}),
            },
        )
    if "rewards" in data:
        kwargs["rewards"] = _build_section(RewardWeights, data["rewards"], "rewards")
    return ScenarioConfig(**kwargs)


def config_to_dict(config: ScenarioConfig) -> dict:
    return {
        "version": CONFIG_SCHEMA_VERSION,
        "arena": list(config.arena),
        "n_humans": config.n_humans,
        "static_obstacles": [shape_to_dict(s) for s in config.static_obstacles],
        "sim": {f.name: getattr(config.sim, f.name) for f in fields(SimParams)},
        "sensors": {
            "modalities": list(config.sensors.modalities),
            "closest_format": config.sensors.closest_format,
            "ray_count": config.sensors.ray_count,
            "ray_max_range": config.sensors.ray_max_range,
            "grid_side": config.sensors.grid_side,
            "grid_resolution": config.sensors.grid_resolution,
        },
        "rewards": {f.name: getattr(config.rewards, f.name) for f in fields(RewardWeights)},
        "agent_radius": config.agent_radius,
        "human_radius": config.human_radius,
        "goal_radius": config.goal_radius,
        "max_steps": config.max_steps,
        "seed": config.seed,
    }


def loads_config(text: str) -> ScenarioConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return config_from_dict(data)


def load_config(path: str | Path) -> ScenarioConfig:
    return loads_config(Path(path).read_text())


def dumps_config(config: ScenarioConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n"


def save_config(config: ScenarioConfig, path: str | Path) -> None:
    Path(path).write_text(dumps_config(config))


def config_digest(config: ScenarioConfig) -> bytes:
    """32-byte digest binding derived artifacts (datasets, weights) to a scenario."""
    canonical = json.dumps(config_to_dict(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).digest()
