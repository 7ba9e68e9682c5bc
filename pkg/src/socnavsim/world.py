"""World state and the fixed-timestep transition.

The agent moves by commanded velocity; humans move by a weighted sum of a
goal-attraction force and linear-ramp repulsion from the other humans and
from static shapes.  Humans never react to the agent: early experiments
with agent-aware repulsion let a learned policy shove people aside, so the
agent is excluded from every human force term by construction.

``step`` is a pure transition: it never mutates its input and the same
(state, action, params) triple always produces the identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from . import kernels
from .errors import ScenarioSamplingError
from .geometry import Shape, Vec2, distance_to_surface, shape_from_dict, shape_to_dict

STATE_SCHEMA_VERSION = 1


class Outcome(Enum):
    SUCCESS = "success"
    COLLISION = "collision"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class Action:
    """Holonomic world-frame velocity command; components clamp to [-1, 1]."""

    vx: float
    vy: float

    def __post_init__(self):
        if not (math.isfinite(self.vx) and math.isfinite(self.vy)):
            raise ValueError(f"action components must be finite, got ({self.vx}, {self.vy})")
        object.__setattr__(self, "vx", min(max(self.vx, -1.0), 1.0))
        object.__setattr__(self, "vy", min(max(self.vy, -1.0), 1.0))


@dataclass(frozen=True)
class SimParams:
    dt: float = 0.1
    agent_max_speed: float = 1.5
    human_max_speed: float = 1.0
    goal_sat_dist: float = 1.0  # distance at which the goal force saturates at 1
    social_radius: float = 1.5  # repulsion cutoff between humans
    goal_weight: float = 1.0
    social_weight: float = 1.0

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"SimParams.{name} must be > 0, got {v}")


@dataclass(frozen=True)
class Human:
    pos: Vec2
    radius: float
    goal: Vec2
    max_speed: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError(f"human radius must be > 0, got {self.radius}")
        if self.max_speed <= 0.0:
            raise ValueError(f"human max_speed must be > 0, got {self.max_speed}")


@dataclass(frozen=True)
class WorldState:
    """Single source of truth for one simulated scene."""

    arena: tuple[float, float]
    agent_pos: Vec2
    agent_radius: float
    agent_goal: Vec2
    goal_radius: float
    humans: tuple[Human, ...]
    static_obstacles: tuple[Shape, ...]
    step_index: int = 0
    rng_state: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.agent_radius <= 0.0 or self.goal_radius <= 0.0:
            raise ValueError("agent_radius and goal_radius must be > 0")
        if self.arena[0] <= 0.0 or self.arena[1] <= 0.0:
            raise ValueError(f"arena dimensions must be > 0, got {self.arena}")
        if self.step_index < 0:
            raise ValueError(f"step_index must be >= 0, got {self.step_index}")


def goal_force(pos: Vec2, goal: Vec2, d_sat: float) -> Vec2:
    """Unit-capped attraction toward the goal, linear in distance below d_sat."""
    dx = goal.x - pos.x
    dy = goal.y - pos.y
    d = math.hypot(dx, dy)
    if d == 0.0:
        return Vec2(0.0, 0.0)
    m = min(d / d_sat, 1.0)
    return Vec2(dx / d * m, dy / d * m)


def social_force(subject_pos: Vec2, others: list[Vec2], r_soc: float) -> Vec2:
    """Summed linear-ramp repulsion from other positions, zero beyond r_soc.

    A coincident other (zero distance) contributes unit magnitude toward +x.
    """
    fx = 0.0
    fy = 0.0
    for other in others:
        dx = subject_pos.x - other.x
        dy = subject_pos.y - other.y
        d = math.hypot(dx, dy)
        if d >= r_soc:
            continue
        if d == 0.0:
            fx += 1.0
        else:
            m = (r_soc - d) / r_soc
            fx += dx / d * m
            fy += dy / d * m
    return Vec2(fx, fy)


@lru_cache(maxsize=64)
def _packed_statics(shapes: tuple[Shape, ...]) -> tuple[np.ndarray, np.ndarray]:
    circles, rects = kernels.pack_shapes(list(shapes))
    circles.setflags(write=False)
    rects.setflags(write=False)
    return circles, rects


def _rng_from_state(rng_state: dict) -> tuple[np.random.Generator, np.random.PCG64]:
    bit_gen = np.random.PCG64(0)
    bit_gen.state = rng_state
    return np.random.Generator(bit_gen), bit_gen


def make_rng_state(entropy: list[int]) -> dict:
    """Initial deterministic generator state from a list of integer keys."""
    seq = np.random.SeedSequence([e & 0xFFFFFFFFFFFFFFFF for e in entropy])
    return np.random.PCG64(seq).state


def sample_free_point(
    rng: np.random.Generator,
    arena: tuple[float, float],
    statics: tuple[Shape, ...],
    edge_margin: float = 0.0,
    static_margin: float = 0.0,
    keep_away: tuple[tuple[Vec2, float], ...] = (),
    max_attempts: int = 10_000,
) -> Vec2:
    """Rejection-sample a point uniform over the arena.

    Accepts a point only if it keeps ``edge_margin`` from the arena border,
    ``static_margin`` of surface clearance from every static shape, and at
    least the given distance from every (point, distance) pair in
    ``keep_away``.
    """
    w, h = arena
    if 2.0 * edge_margin >= w or 2.0 * edge_margin >= h:
        raise ScenarioSamplingError("arena too small for the requested margin")
    for _ in range(max_attempts):
        x = rng.uniform(edge_margin, w - edge_margin)
        y = rng.uniform(edge_margin, h - edge_margin)
        p = Vec2(x, y)
        if any(distance_to_surface(p, s) < static_margin for s in statics):
            continue
        if any(math.hypot(p.x - q.x, p.y - q.y) < d for q, d in keep_away):
            continue
        return p
    raise ScenarioSamplingError("scenario too crowded: free-space sampling failed")


def _resample_goal(
    rng: np.random.Generator, state: WorldState, human_pos: Vec2, human_radius: float
) -> Vec2:
    return sample_free_point(
        rng,
        state.arena,
        state.static_obstacles,
        edge_margin=0.0,
        static_margin=human_radius,
        keep_away=((human_pos, 2.0),),
    )


def step(state: WorldState, action: Action, params: SimParams) -> WorldState:
    """Advance the world one timestep; the input state is left untouched."""
    agent_pos = Vec2(
        state.agent_pos.x + action.vx * params.agent_max_speed * params.dt,
        state.agent_pos.y + action.vy * params.agent_max_speed * params.dt,
    )

    humans = state.humans
    rng_state = state.rng_state
    if humans:
        n = len(humans)
        hpos = np.empty((n, 2))
        hgoal = np.empty((n, 2))
        hvmax = np.empty(n)
        for i, hm in enumerate(humans):
            hpos[i, 0] = hm.pos.x
            hpos[i, 1] = hm.pos.y
            hgoal[i, 0] = hm.goal.x
            hgoal[i, 1] = hm.goal.y
            hvmax[i] = hm.max_speed
        circles, rects = _packed_statics(state.static_obstacles)
        vel = kernels.human_velocities(
            hpos,
            hgoal,
            hvmax,
            circles,
            rects,
            params.goal_sat_dist,
            params.social_radius,
            params.goal_weight,
            params.social_weight,
        )
        new_pos = hpos + vel * params.dt

        arrived = [
            i
            for i in range(n)
            if math.hypot(new_pos[i, 0] - hgoal[i, 0], new_pos[i, 1] - hgoal[i, 1])
            < state.goal_radius
        ]
        rng = None
        if arrived:
            rng, bit_gen = _rng_from_state(state.rng_state)
        new_humans = []
        for i, hm in enumerate(humans):
            pos = Vec2(new_pos[i, 0], new_pos[i, 1])
            goal = hm.goal
            if rng is not None and i in arrived:
                goal = _resample_goal(rng, state, pos, hm.radius)
            new_humans.append(Human(pos, hm.radius, goal, hm.max_speed))
        humans = tuple(new_humans)
        if arrived:
            rng_state = bit_gen.state

    return replace(
        state,
        agent_pos=agent_pos,
        humans=humans,
        step_index=state.step_index + 1,
        rng_state=rng_state,
    )


def check_termination(state: WorldState) -> Optional[Outcome]:
    """Goal arrival or collision; reaching the goal wins when both hold.

    Step-budget truncation is the episode layer's decision, not the
    simulator's.
    """
    if (state.agent_pos - state.agent_goal).norm() < state.goal_radius:
        return Outcome.SUCCESS
    for hm in state.humans:
        if (state.agent_pos - hm.pos).norm() < state.agent_radius + hm.radius:
            return Outcome.COLLISION
    for shape in state.static_obstacles:
        if distance_to_surface(state.agent_pos, shape) < state.agent_radius:
            return Outcome.COLLISION
    return None


def state_to_dict(state: WorldState) -> dict:
    return {
        "version": STATE_SCHEMA_VERSION,
        "arena": list(state.arena),
        "agent_pos": [state.agent_pos.x, state.agent_pos.y],
        "agent_radius": state.agent_radius,
        "agent_goal": [state.agent_goal.x, state.agent_goal.y],
        "goal_radius": state.goal_radius,
        "humans": [
            {
                "pos": [h.pos.x, h.pos.y],
                "radius": h.radius,
                "goal": [h.goal.x, h.goal.y],
                "max_speed": h.max_speed,
            }
            for h in state.humans
        ],
        "static_obstacles": [shape_to_dict(s) for s in state.static_obstacles],
        "step_index": state.step_index,
        "rng_state": _rng_state_to_jsonable(state.rng_state),
    }


def state_from_dict(data: dict) -> WorldState:
    version = data.get("version")
    if version != STATE_SCHEMA_VERSION:
        raise ValueError(f"unsupported state snapshot version: {version!r}")
    return WorldState(
        arena=(float(data["arena"][0]), float(data["arena"][1])),
        agent_pos=Vec2(*data["agent_pos"]),
        agent_radius=float(data["agent_radius"]),
        agent_goal=Vec2(*data["agent_goal"]),
        goal_radius=float(data["goal_radius"]),
        humans=tuple(
            Human(Vec2(*h["pos"]), float(h["radius"]), Vec2(*h["goal"]), float(h["max_speed"]))
            for h in data["humans"]
        ),
        static_obstacles=tuple(shape_from_dict(s) for s in data["static_obstacles"]),
        step_index=int(data["step_index"]),
        rng_state=_rng_state_from_jsonable(data["rng_state"]),
    )


def _rng_state_to_jsonable(rng_state: dict) -> dict:
    # PCG64 state holds 128-bit ints; JSON ints are arbitrary precision, so
    # a plain copy round-trips exactly.
    return {
        "bit_generator": rng_state["bit_generator"],
        "state": {"state": rng_state["state"]["state"], "inc": rng_state["state"]["inc"]},
        "has_uint32": rng_state["has_uint32"],
        "uinteger": rng_state["uinteger"],
    }


def _rng_state_from_jsonable(data: dict) -> dict:
    return {
        "bit_generator": data["bit_generator"],
        "state": {"state": int(data["state"]["state"]), "inc": int(data["state"]["inc"])},
        "has_uint32": int(data["has_uint32"]),
        "uinteger": int(data["uinteger"]),
    }
