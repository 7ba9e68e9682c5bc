"""Hot-path scene kernels with a selectable backend.

The numba backend is used when available; set ``SOCNAVSIM_NUMBA=0`` in the
environment before import (or call :func:`use_backend`) to force the
pure-numpy fallback.  Both backends implement the same three operations
over packed scenes and agree to floating-point tolerance (the occupancy
grids agree exactly).
"""

from __future__ import annotations

import math
import os
from functools import lru_cache

import numpy as np

from ..geometry import AxisRect, Circle, Shape
from . import numpy_impl

_BACKENDS: dict[str, object] = {"numpy": numpy_impl}

if os.environ.get("SOCNAVSIM_NUMBA", "1").lower() not in ("0", "false", "off"):
    try:
        from . import numba_impl

        _BACKENDS["numba"] = numba_impl
    except ImportError:  # pragma: no cover - numba is an install-time extra
        pass

_active = _BACKENDS.get("numba", numpy_impl)

_EMPTY_CIRCLES = np.zeros((0, 3), dtype=np.float64)
_EMPTY_RECTS = np.zeros((0, 4), dtype=np.float64)


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def current_backend() -> str:
    for name, mod in _BACKENDS.items():
        if mod is _active:
            return name
    raise RuntimeError("no active kernel backend")


def use_backend(name: str) -> None:
    """Switch the active backend ("numba" or "numpy")."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    _active = _BACKENDS[name]


def get_backend(name: str):
    """Direct access to a backend module (used by the benchmark)."""
    if name not in _BACKENDS:
        raise ValueError(f"unknown kernel backend {name!r}; available: {available_backends()}")
    return _BACKENDS[name]


def pack_shapes(shapes: list[Shape]) -> tuple[np.ndarray, np.ndarray]:
    """Split shapes into packed circle (n, 3) and rect (m, 4) arrays."""
    if not shapes:
        return _EMPTY_CIRCLES, _EMPTY_RECTS
    circles = [s for s in shapes if isinstance(s, Circle)]
    rects = [s for s in shapes if isinstance(s, AxisRect)]
    carr = (
        np.array([[s.center.x, s.center.y, s.radius] for s in circles], dtype=np.float64)
        if circles
        else _EMPTY_CIRCLES
    )
    rarr = (
        np.array(
            [[s.center.x, s.center.y, s.half_extents.x, s.half_extents.y] for s in rects],
            dtype=np.float64,
        )
        if rects
        else _EMPTY_RECTS
    )
    return carr, rarr


@lru_cache(maxsize=8)
def ray_directions(ray_count: int) -> np.ndarray:
    """Unit direction for ray k at world angle 2*pi*k/ray_count from +x."""
    angles = 2.0 * math.pi * np.arange(ray_count) / ray_count
    dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    dirs.setflags(write=False)
    return dirs


def raycast(ox, oy, dirs, circles, rects, max_range):
    return _active.raycast(ox, oy, dirs, circles, rects, max_range)


def occupancy(ax, ay, n_cells, resolution, side, circles, rects):
    return _active.occupancy(ax, ay, n_cells, resolution, side, circles, rects)


def human_velocities(hpos, hgoal, hvmax, circles, rects, d_sat, r_soc, w_goal, w_soc):
    return _active.human_velocities(
        hpos, hgoal, hvmax, circles, rects, d_sat, r_soc, w_goal, w_soc
    )


def warmup() -> None:
    """Trigger JIT compilation of every kernel (no-op on the numpy backend)."""
    dirs = ray_directions(4)
    circles = np.array([[1.0, 0.0, 0.3]])
    rects = np.array([[0.0, 2.0, 0.5, 0.5]])
    raycast(0.0, 0.0, dirs, circles, rects, 5.0)
    occupancy(0.0, 0.0, 8, 0.25, 2.0, circles, rects)
    human_velocities(
        np.array([[0.0, 0.0], [1.0, 1.0]]),
        np.array([[2.0, 2.0], [0.0, 0.0]]),
        np.array([1.0, 1.0]),
        circles,
        rects,
        1.0,
        1.5,
        1.0,
        1.0,
    )
