"""Observation synthesis: closest obstacle, simulated lidar, occupancy grid.

All sensors are read-only views of a WorldState in the world frame (the
holonomic agent has no heading, so nothing is rotated).  The agent's own
body is invisible to every sensor; the relative goal is always reported.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .geometry import Circle, Shape, closest_surface_point, distance_to_surface
from .world import WorldState

MODALITIES = ("closest", "raycast", "occupancy")


@dataclass(frozen=True)
class SensorConfig:
    modalities: tuple[str, ...] = ("raycast", "occupancy")
    closest_format: str = "polar"  # or "cartesian"
    ray_count: int = 360
    ray_max_range: float = 5.0
    grid_side: float = 6.0
    grid_resolution: float = 0.1

    def __post_init__(self):
        unknown = set(self.modalities) - set(MODALITIES)
        if unknown:
            raise ValueError(f"unknown modalities: {sorted(unknown)}; valid: {MODALITIES}")
        if len(set(self.modalities)) != len(self.modalities):
            raise ValueError("duplicate modality")
        if self.closest_format not in ("polar", "cartesian"):
            raise ValueError(f"closest_format must be polar|cartesian, got {self.closest_format!r}")
        if self.ray_count < 4:
            raise ValueError(f"ray_count must be >= 4, got {self.ray_count}")
        if self.ray_max_range <= 0:
            raise ValueError(f"ray_max_range must be > 0, got {self.ray_max_range}")
        cells = self.grid_side / self.grid_resolution
        if abs(cells - round(cells)) > 1e-9 or round(cells) < 1:
            raise ValueError(
                f"grid_side/grid_resolution must be a whole number of cells, got {cells}"
            )

    @property
    def grid_cells(self) -> int:
        return int(round(self.grid_side / self.grid_resolution))


@dataclass(frozen=True, eq=False)
class Observation:
    """Bundle of the enabled modalities plus the relative goal."""

    goal_rel: tuple[float, float]  # (distance m, world-frame angle in (-pi, pi])
    closest: tuple[float, float] | None = None
    raycast: np.ndarray | None = None  # (ray_count,) distances in [0, max_range]
    occupancy: np.ndarray | None = None  # (n, n) uint8, row 0 at minimum y

    def __eq__(self, other):
        if not isinstance(other, Observation):
            return NotImplemented
        if self.goal_rel != other.goal_rel or self.closest != other.closest:
            return False
        for a, b in ((self.raycast, other.raycast), (self.occupancy, other.occupancy)):
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True


def _world_angle(dx: float, dy: float) -> float:
    """atan2 normalized onto (-pi, pi]."""
    angle = math.atan2(dy, dx)
    return math.pi if angle == -math.pi else angle


@lru_cache(maxsize=64)
def _packed_static_scene(statics: tuple[Shape, ...]) -> tuple[np.ndarray, np.ndarray]:
    circles, rects = kernels.pack_shapes(list(statics))
    circles.setflags(write=False)
    rects.setflags(write=False)
    return circles, rects


def _scene_arrays(state: WorldState) -> tuple[np.ndarray, np.ndarray]:
    """All obstacle shapes (humans as circles + statics), packed."""
    static_circles, rects = _packed_static_scene(state.static_obstacles)
    if not state.humans:
        return static_circles, rects
    human_circles = np.array(
        [[h.pos.x, h.pos.y, h.radius] for h in state.humans], dtype=np.float64
    )
    if static_circles.shape[0] == 0:
        return human_circles, rects
    return np.vstack([static_circles, human_circles]), rects


def sense_goal(state: WorldState) -> tuple[float, float]:
    dx = state.agent_goal.x - state.agent_pos.x
    dy = state.agent_goal.y - state.agent_pos.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        return (0.0, 0.0)
    return (d, _world_angle(dx, dy))


def sense_closest(state: WorldState, closest_format: str = "polar") -> tuple[float, float]:
    """Surface point of the nearest obstacle (static or human).

    Ties break in favor of the earlier candidate: statics in declaration
    order, then humans.
    """
    best_d = math.inf
    best_q = None
    candidates: list[Shape] = list(state.static_obstacles)
    candidates.extend(Circle(h.pos, h.radius) for h in state.humans)
    if not candidates:
        raise ValueError("no obstacles to sense")
    for shape in candidates:
        d = abs(distance_to_surface(state.agent_pos, shape))
        if d < best_d:
            best_d = d
            best_q = closest_surface_point(state.agent_pos, shape)
    dx = best_q.x - state.agent_pos.x
    dy = best_q.y - state.agent_pos.y
    if closest_format == "cartesian":
        return (dx, dy)
    d = math.hypot(dx, dy)
    return (d, 0.0 if d == 0.0 else _world_angle(dx, dy))


def sense_raycast(state: WorldState, cfg: SensorConfig) -> np.ndarray:
    """Distance per ray; ray k points at world angle 2*pi*k/ray_count."""
    circles, rects = _scene_arrays(state)
    dirs = kernels.ray_directions(cfg.ray_count)
    return kernels.raycast(
        state.agent_pos.x, state.agent_pos.y, dirs, circles, rects, cfg.ray_max_range
    )


def sense_occupancy(state: WorldState, cfg: SensorConfig) -> np.ndarray:
    """Binary grid centered on the agent: 1 iff a cell center is covered."""
    circles, rects = _scene_arrays(state)
    return kernels.occupancy(
        state.agent_pos.x,
        state.agent_pos.y,
        cfg.grid_cells,
        cfg.grid_resolution,
        cfg.grid_side,
        circles,
        rects,
    )


def observe(state: WorldState, cfg: SensorConfig) -> Observation:
    """Assemble exactly the configured modalities from one state."""
    return Observation(
        goal_rel=sense_goal(state),
        closest=sense_closest(state, cfg.closest_format) if "closest" in cfg.modalities else None,
        raycast=sense_raycast(state, cfg) if "raycast" in cfg.modalities else None,
        occupancy=sense_occupancy(state, cfg) if "occupancy" in cfg.modalities else None,
    )
