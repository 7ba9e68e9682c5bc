"""Exact 2D geometry primitives: vectors, circles, axis-aligned rectangles.

Everything here is a pure function over immutable values, in double
precision.  These are the reference (scalar) implementations; the batched
hot-path equivalents live in :mod:`socnavsim.kernels` and must agree with
these to within the tolerances stated in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Vec2:
    """A 2D point or displacement in meters. Components are always finite."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Vec2 components must be finite, got ({self.x}, {self.y})")

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, scalar: float) -> "Vec2":
        return Vec2(self.x * scalar, self.y * scalar)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def normalized(self) -> "Vec2":
        """Unit vector in the same direction; (0, 0) maps to (0, 0)."""
        n = self.norm()
        if n == 0.0:
            return Vec2(0.0, 0.0)
        return Vec2(self.x / n, self.y / n)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Circle:
    center: Vec2
    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValueError(f"circle radius must be > 0, got {self.radius}")


@dataclass(frozen=True)
class AxisRect:
    """Axis-aligned rectangle given by center and strictly positive half extents."""

    center: Vec2
    half_extents: Vec2

    def __post_init__(self):
        hx, hy = self.half_extents.x, self.half_extents.y
        if not (hx > 0.0 and hy > 0.0):
            raise ValueError(f"rect half extents must be > 0, got ({hx}, {hy})")


Shape = Union[Circle, AxisRect]


def point_in_shape(point: Vec2, shape: Shape) -> bool:
    """Closed containment test (boundary counts as inside)."""
    if isinstance(shape, Circle):
        dx = point.x - shape.center.x
        dy = point.y - shape.center.y
        return dx * dx + dy * dy <= shape.radius * shape.radius
    dx = abs(point.x - shape.center.x)
    dy = abs(point.y - shape.center.y)
    return dx <= shape.half_extents.x and dy <= shape.half_extents.y


def distance_to_surface(point: Vec2, shape: Shape) -> float:
    """Signed Euclidean distance from ``point`` to the shape boundary.

    Negative iff the point lies strictly inside the shape.  Exact for both
    shape kinds.
    """
    if isinstance(shape, Circle):
        return math.hypot(point.x - shape.center.x, point.y - shape.center.y) - shape.radius
    dx = abs(point.x - shape.center.x) - shape.half_extents.x
    dy = abs(point.y - shape.center.y) - shape.half_extents.y
    if dx > 0.0 or dy > 0.0:
        return math.hypot(max(dx, 0.0), max(dy, 0.0))
    return max(dx, dy)


def closest_surface_point(point: Vec2, shape: Shape) -> Vec2:
    """The boundary point of ``shape`` nearest to ``point``.

    Well defined for points inside and outside.  The degenerate query at the
    exact shape center resolves toward +x for determinism.
    """
    if isinstance(shape, Circle):
        dx = point.x - shape.center.x
        dy = point.y - shape.center.y
        d = math.hypot(dx, dy)
        if d == 0.0:
            return Vec2(shape.center.x + shape.radius, shape.center.y)
        scale = shape.radius / d
        return Vec2(shape.center.x + dx * scale, shape.center.y + dy * scale)

    cx, cy = shape.center.x, shape.center.y
    hx, hy = shape.half_extents.x, shape.half_extents.y
    lx = point.x - cx
    ly = point.y - cy
    outside_x = abs(lx) > hx
    outside_y = abs(ly) > hy
    if outside_x or outside_y:
        qx = min(max(point.x, cx - hx), cx + hx)
        qy = min(max(point.y, cy - hy), cy + hy)
        return Vec2(qx, qy)
    # Interior: project onto the nearest face; +x face wins ties, then -x, +y, -y.
    faces = (hx - lx, hx + lx, hy - ly, hy + ly)
    nearest = faces.index(min(faces))
    if nearest == 0:
        return Vec2(cx + hx, point.y)
    if nearest == 1:
        return Vec2(cx - hx, point.y)
    if nearest == 2:
        return Vec2(point.x, cy + hy)
    return Vec2(point.x, cy - hy)


def shape_to_dict(shape: Shape) -> dict:
    if isinstance(shape, Circle):
        return {"kind": "circle", "center": [shape.center.x, shape.center.y], "radius": shape.radius}
    return {
        "kind": "rect",
        "center": [shape.center.x, shape.center.y],
        "half_extents": [shape.half_extents.x, shape.half_extents.y],
    }


def shape_from_dict(data: dict) -> Shape:
    kind = data.get("kind")
    if kind == "circle":
        return Circle(Vec2(*data["center"]), float(data["radius"]))
    if kind == "rect":
        return AxisRect(Vec2(*data["center"]), Vec2(*data["half_extents"]))
    raise ValueError(f"unknown shape kind: {kind!r}")


def ray_intersect(origin: Vec2, direction: Vec2, shape: Shape) -> float | None:
    """Smallest t >= 0 such that ``origin + t * direction`` lies on the boundary.

    ``direction`` must be a unit vector.  Returns ``None`` on a miss; an
    origin inside the shape yields ``0.0``.
    """
    if isinstance(shape, Circle):
        fx = origin.x - shape.center.x
        fy = origin.y - shape.center.y
        b = fx * direction.x + fy * direction.y  # half of the usual quadratic b
        c = fx * fx + fy * fy - shape.radius * shape.radius
        disc = b * b - c
        if disc < 0.0:
            return None
        root = math.sqrt(disc)
        t_near = -b - root
        t_far = -b + root
        if t_far < 0.0:
            return None
        return t_near if t_near >= 0.0 else 0.0

    t_min = -math.inf
    t_max = math.inf
    for o, d, c, h in (
        (origin.x, direction.x, shape.center.x, shape.half_extents.x),
        (origin.y, direction.y, shape.center.y, shape.half_extents.y),
    ):
        lo = c - h
        hi = c + h
        if d == 0.0:
            if o < lo or o > hi:
                return None
            continue
        t1 = (lo - o) / d
        t2 = (hi - o) / d
        if t1 > t2:
            t1, t2 = t2, t1
        t_min = max(t_min, t1)
        t_max = min(t_max, t2)
    if t_max < t_min or t_max < 0.0:
        return None
    return t_min if t_min >= 0.0 else 0.0
