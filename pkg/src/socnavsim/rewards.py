"""Per-step reward: dense shaping on intermediate steps, sparse at the end.

Intermediate steps pay a fixed step cost, earn progress along the
goal-attraction direction, and pay a proximity penalty near humans.  A
terminal step (goal or collision) replaces all of that with a single
outcome term.  Truncated episodes never see the terminal term: their last
step is scored like any intermediate one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Vec2
from .world import Outcome, SimParams, goal_force


@dataclass(frozen=True)
class RewardWeights:
    goal_reward: float = 500.0  # terminal credit for reaching the goal
    collision_penalty: float = -500.0  # terminal charge for any collision
    step_cost: float = 5.0  # magnitude; applied as -step_cost every step
    progress_weight: float = 10.0
    social_weight: float = -100.0
    social_radius: float = 1.5  # proximity-penalty cutoff around humans

    def __post_init__(self):
        if self.step_cost < 0:
            raise ValueError(f"step_cost is a magnitude and must be >= 0, got {self.step_cost}")
        if self.social_radius <= 0:
            raise ValueError(f"social_radius must be > 0, got {self.social_radius}")


@dataclass(frozen=True)
class RewardBreakdown:
    step: float
    progress: float
    social: float
    end: float
    total: float
    is_terminal: bool

    @staticmethod
    def zero() -> "RewardBreakdown":
        return RewardBreakdown(0.0, 0.0, 0.0, 0.0, 0.0, False)

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "progress": self.progress,
            "social": self.social,
            "end": self.end,
            "total": self.total,
            "is_terminal": self.is_terminal,
        }


def intermediate_reward(
    prev_pos: Vec2,
    new_pos: Vec2,
    goal: Vec2,
    humans: tuple[Vec2, ...],
    weights: RewardWeights,
    params: SimParams,
) -> RewardBreakdown:
    """Dense reward for a step that did not end the episode.

    Progress is the inner product of the goal-attraction force at the
    previous position with the normalized displacement, so standing still
    scores zero and moving straight along the force at full speed scores
    the full progress weight.  The proximity penalty sums the linear
    repulsion ramp over all human center distances at the new position.
    """
    step = -weights.step_cost

    force = goal_force(prev_pos, goal, params.goal_sat_dist)
    scale = params.agent_max_speed * params.dt
    disp_x = (new_pos.x - prev_pos.x) / scale
    disp_y = (new_pos.y - prev_pos.y) / scale
    progress = weights.progress_weight * (force.x * disp_x + force.y * disp_y)

    proximity = 0.0
    r = weights.social_radius
    for h in humans:
        d = math.hypot(new_pos.x - h.x, new_pos.y - h.y)
        if d < r:
            proximity += (r - d) / r
    social = weights.social_weight * proximity

    total = step + progress + social
    return RewardBreakdown(step, progress, social, 0.0, total, False)


def terminal_reward(outcome: Outcome, weights: RewardWeights) -> RewardBreakdown:
    """Sparse reward for a goal/collision ending; truncation never lands here."""
    if outcome is Outcome.SUCCESS:
        end = weights.goal_reward
    elif outcome is Outcome.COLLISION:
        end = weights.collision_penalty
    else:
        raise ValueError(f"terminal reward is undefined for outcome {outcome!r}")
    return RewardBreakdown(0.0, 0.0, 0.0, end, end, True)
