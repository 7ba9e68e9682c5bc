"""Scene rendering to binary portable pixmaps (P6).

Pure numpy rasterization with deterministic bytes: the same state and spec
always produce the identical file.  World +y maps to image up (row 0 is
the top of the arena).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import BinaryIO

import numpy as np

from .geometry import AxisRect, Circle, Shape
from .world import WorldState

BACKGROUND = (255, 255, 255)
STATIC_COLOR = (128, 128, 128)
GOAL_COLOR = (70, 180, 90)
HUMAN_COLOR = (215, 70, 60)
AGENT_COLOR = (50, 100, 220)


@dataclass(frozen=True)
class RenderSpec:
    stride: int = 1  # render every stride-th step
    scale: int = 50  # pixels per meter

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.scale < 1:
            raise ValueError(f"scale must be >= 1, got {self.scale}")


def _paint_disc(img, xs, ys, cx, cy, radius, color):
    mask = (xs[None, :] - cx) ** 2 + (ys[:, None] - cy) ** 2 <= radius * radius
    img[mask] = color


def _paint_shape(img, xs, ys, shape: Shape, color):
    if isinstance(shape, Circle):
        _paint_disc(img, xs, ys, shape.center.x, shape.center.y, shape.radius, color)
    else:
        assert isinstance(shape, AxisRect)
        mask = (np.abs(xs[None, :] - shape.center.x) <= shape.half_extents.x) & (
            np.abs(ys[:, None] - shape.center.y) <= shape.half_extents.y
        )
        img[mask] = color


def render_frame(state: WorldState, spec: RenderSpec, sink: BinaryIO) -> None:
    """Rasterize one frame: obstacles gray, goal green, humans red, agent blue."""
    w, h = state.arena
    width_px = round(w * spec.scale)
    height_px = round(h * spec.scale)

    # World coordinates of pixel centers; row 0 sits at the arena top (max y).
    xs = (np.arange(width_px) + 0.5) / spec.scale
    ys = h - (np.arange(height_px) + 0.5) / spec.scale

    img = np.empty((height_px, width_px, 3), dtype=np.uint8)
    img[:] = BACKGROUND
    for shape in state.static_obstacles:
        _paint_shape(img, xs, ys, shape, STATIC_COLOR)
    _paint_disc(img, xs, ys, state.agent_goal.x, state.agent_goal.y, state.goal_radius, GOAL_COLOR)
    for human in state.humans:
        _paint_disc(img, xs, ys, human.pos.x, human.pos.y, human.radius, HUMAN_COLOR)
    _paint_disc(img, xs, ys, state.agent_pos.x, state.agent_pos.y, state.agent_radius, AGENT_COLOR)

    sink.write(f"P6\n{width_px} {height_px}\n255\n".encode())
    sink.write(img.tobytes())
