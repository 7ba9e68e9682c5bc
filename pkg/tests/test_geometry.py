"""Geometry primitives: analytic cases, oracle agreement, and invariants."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socnavsim.geometry import (
    AxisRect,
    Circle,
    Vec2,
    closest_surface_point,
    distance_to_surface,
    point_in_shape,
    ray_intersect,
)

from .oracles import boundary_sample_closest, march_single_ray


def as_shape_tuple(shape):
    if isinstance(shape, Circle):
        return ("circle", shape.center.x, shape.center.y, shape.radius)
    return ("rect", shape.center.x, shape.center.y, shape.half_extents.x, shape.half_extents.y)


def random_shape(rng):
    if rng.random() < 0.5:
        return Circle(Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)), rng.uniform(0.1, 2.0))
    return AxisRect(
        Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
        Vec2(rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)),
    )


class TestVec2:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Vec2(math.nan, 0.0)
        with pytest.raises(ValueError):
            Vec2(0.0, math.inf)

    def test_arithmetic(self):
        assert Vec2(1, 2) + Vec2(3, 4) == Vec2(4, 6)
        assert Vec2(3, 4).norm() == 5.0
        assert Vec2(0, 0).normalized() == Vec2(0, 0)


class TestDistanceToSurface:
    def test_circle_outside(self):
        assert distance_to_surface(Vec2(0, 0), Circle(Vec2(2, 0), 0.5)) == pytest.approx(1.5)

    def test_circle_center_is_negative(self):
        assert distance_to_surface(Vec2(2, 0), Circle(Vec2(2, 0), 0.5)) == pytest.approx(-0.5)

    def test_rect_corner(self):
        d = distance_to_surface(Vec2(0, 0), AxisRect(Vec2(3, 4), Vec2(1, 1)))
        assert d == pytest.approx(math.sqrt(2**2 + 3**2))

    def test_rect_inside(self):
        assert distance_to_surface(Vec2(3, 4), AxisRect(Vec2(3, 4), Vec2(1, 2))) == pytest.approx(-1.0)

    def test_sign_matches_containment(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            shape = random_shape(rng)
            p = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            d = distance_to_surface(p, shape)
            if d < 0:
                assert point_in_shape(p, shape)
            elif d > 0:
                assert not point_in_shape(p, shape)


class TestClosestSurfacePoint:
    def test_circle_along_center_line(self):
        q = closest_surface_point(Vec2(0, 0), Circle(Vec2(2, 0), 0.5))
        assert (q.x, q.y) == pytest.approx((1.5, 0.0))

    def test_rect_face_projection(self):
        q = closest_surface_point(Vec2(0, 5), AxisRect(Vec2(0, 0), Vec2(1, 1)))
        assert (q.x, q.y) == pytest.approx((0.0, 1.0))

    def test_center_tie_resolves_plus_x(self):
        q = closest_surface_point(Vec2(1, 1), Circle(Vec2(1, 1), 0.4))
        assert (q.x, q.y) == (1.4, 1.0)
        q = closest_surface_point(Vec2(0, 0), AxisRect(Vec2(0, 0), Vec2(2, 2)))
        assert (q.x, q.y) == (2.0, 0.0)

    def test_norm_identity(self):
        # |closest - p| == |signed distance| to 1e-9.
        rng = np.random.default_rng(7)
        for _ in range(500):
            shape = random_shape(rng)
            p = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            q = closest_surface_point(p, shape)
            assert (q - p).norm() == pytest.approx(abs(distance_to_surface(p, shape)), abs=1e-9)

    def test_against_boundary_sampling_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(60):
            shape = random_shape(rng)
            p = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            q = closest_surface_point(p, shape)
            ox, oy = boundary_sample_closest(p.x, p.y, as_shape_tuple(shape))
            assert math.hypot(q.x - ox, q.y - oy) < 1e-3


class TestRayIntersect:
    def test_circle_head_on(self):
        t = ray_intersect(Vec2(0, 0), Vec2(1, 0), Circle(Vec2(2, 0), 0.5))
        assert t == pytest.approx(1.5)

    def test_circle_miss(self):
        assert ray_intersect(Vec2(0, 0), Vec2(0, 1), Circle(Vec2(2, 0), 0.5)) is None

    def test_origin_inside_returns_zero(self):
        assert ray_intersect(Vec2(2, 0), Vec2(0, 1), Circle(Vec2(2, 0), 0.5)) == 0.0
        assert ray_intersect(Vec2(0, 0), Vec2(1, 0), AxisRect(Vec2(0, 0), Vec2(1, 1))) == 0.0

    def test_rect_axis_parallel(self):
        t = ray_intersect(Vec2(-3, 0), Vec2(1, 0), AxisRect(Vec2(0, 0), Vec2(1, 1)))
        assert t == pytest.approx(2.0)
        # Parallel ray outside the slab misses.
        assert ray_intersect(Vec2(-3, 2), Vec2(1, 0), AxisRect(Vec2(0, 0), Vec2(1, 1))) is None

    def test_behind_origin_misses(self):
        assert ray_intersect(Vec2(0, 0), Vec2(-1, 0), Circle(Vec2(2, 0), 0.5)) is None

    def test_against_ray_marching_oracle(self):
        rng = np.random.default_rng(17)
        checked = 0
        while checked < 120:
            shape = random_shape(rng)
            o = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            if point_in_shape(o, shape):
                continue
            theta = rng.uniform(0, 2 * math.pi)
            d = Vec2(math.cos(theta), math.sin(theta))
            t = ray_intersect(o, d, shape)
            t_oracle = march_single_ray(o.x, o.y, d.x, d.y, as_shape_tuple(shape), 12.0)
            if t is None or t > 12.0:
                # Oracle may graze where the exact test reports a near-tangent
                # hit; outside that sliver both must agree on a miss.
                assert t_oracle is None or t is not None
            else:
                assert t_oracle is not None
                assert abs(t - t_oracle) < 2e-3
            checked += 1

    def test_translation_monotonicity(self):
        # Moving the origin forward along the ray shortens the hit by the same amount.
        rng = np.random.default_rng(23)
        for _ in range(200):
            shape = random_shape(rng)
            o = Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5))
            theta = rng.uniform(0, 2 * math.pi)
            d = Vec2(math.cos(theta), math.sin(theta))
            t = ray_intersect(o, d, shape)
            if t is None or t == 0.0:
                continue
            delta = rng.uniform(0, t)
            t2 = ray_intersect(Vec2(o.x + delta * d.x, o.y + delta * d.y), d, shape)
            assert t2 is not None
            assert t2 == pytest.approx(t - delta, abs=1e-9)


@given(
    px=st.floats(-5, 5),
    py=st.floats(-5, 5),
    cx=st.floats(-3, 3),
    cy=st.floats(-3, 3),
    r=st.floats(0.1, 2.0),
)
@settings(max_examples=200, deadline=None)
def test_circle_distance_identity_property(px, py, cx, cy, r):
    shape = Circle(Vec2(cx, cy), r)
    p = Vec2(px, py)
    q = closest_surface_point(p, shape)
    assert abs((q - p).norm() - abs(distance_to_surface(p, shape))) < 1e-9


@given(
    px=st.floats(-5, 5),
    py=st.floats(-5, 5),
    cx=st.floats(-3, 3),
    cy=st.floats(-3, 3),
    hx=st.floats(0.1, 2.0),
    hy=st.floats(0.1, 2.0),
)
@settings(max_examples=200, deadline=None)
def test_rect_distance_identity_property(px, py, cx, cy, hx, hy):
    shape = AxisRect(Vec2(cx, cy), Vec2(hx, hy))
    p = Vec2(px, py)
    q = closest_surface_point(p, shape)
    assert abs((q - p).norm() - abs(distance_to_surface(p, shape))) < 1e-9
