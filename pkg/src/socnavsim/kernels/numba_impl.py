"""Numba-compiled scene kernels.

Scenes are passed packed: circles as an (n, 3) array of [cx, cy, r] and
axis-aligned rectangles as an (m, 4) array of [cx, cy, hx, hy].  The math
mirrors :mod:`socnavsim.geometry` exactly; only the batching differs.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True)
def raycast(ox, oy, dirs, circles, rects, max_range):
    n_rays = dirs.shape[0]
    out = np.empty(n_rays, dtype=np.float64)
    for k in range(n_rays):
        dx = dirs[k, 0]
        dy = dirs[k, 1]
        best = max_range
        for i in range(circles.shape[0]):
            fx = ox - circles[i, 0]
            fy = oy - circles[i, 1]
            b = fx * dx + fy * dy
            c = fx * fx + fy * fy - circles[i, 2] * circles[i, 2]
            disc = b * b - c
            if disc < 0.0:
                continue
            root = math.sqrt(disc)
            t_far = -b + root
            if t_far < 0.0:
                continue
            t_near = -b - root
            t = t_near if t_near >= 0.0 else 0.0
            if t < best:
                best = t
        for i in range(rects.shape[0]):
            t_min = -math.inf
            t_max = math.inf
            miss = False
            for axis in range(2):
                o = ox if axis == 0 else oy
                d = dx if axis == 0 else dy
                c = rects[i, axis]
                h = rects[i, 2 + axis]
                lo = c - h
                hi = c + h
                if d == 0.0:
                    if o < lo or o > hi:
                        miss = True
                        break
                    continue
                t1 = (lo - o) / d
                t2 = (hi - o) / d
                if t1 > t2:
                    t1, t2 = t2, t1
                if t1 > t_min:
                    t_min = t1
                if t2 < t_max:
                    t_max = t2
            if miss or t_max < t_min or t_max < 0.0:
                continue
            t = t_min if t_min >= 0.0 else 0.0
            if t < best:
                best = t
        out[k] = best
    return out


@njit(cache=True)
def occupancy(ax, ay, n_cells, resolution, side, circles, rects):
    grid = np.zeros((n_cells, n_cells), dtype=np.uint8)
    x0 = ax - side / 2.0
    y0 = ay - side / 2.0
    for i in range(circles.shape[0]):
        sx = circles[i, 0]
        sy = circles[i, 1]
        r = circles[i, 2]
        r2 = r * r
        # Loose cell bounding box; the exact predicate decides per center.
        jlo = max(0, int(math.floor((sx - r - x0) / resolution - 0.5)) - 1)
        jhi = min(n_cells - 1, int(math.ceil((sx + r - x0) / resolution - 0.5)) + 1)
        ilo = max(0, int(math.floor((sy - r - y0) / resolution - 0.5)) - 1)
        ihi = min(n_cells - 1, int(math.ceil((sy + r - y0) / resolution - 0.5)) + 1)
        for ii in range(ilo, ihi + 1):
            cy = y0 + (ii + 0.5) * resolution
            dy = cy - sy
            for jj in range(jlo, jhi + 1):
                cx = x0 + (jj + 0.5) * resolution
                dx = cx - sx
                if dx * dx + dy * dy <= r2:
                    grid[ii, jj] = 1
    for i in range(rects.shape[0]):
        sx = rects[i, 0]
        sy = rects[i, 1]
        hx = rects[i, 2]
        hy = rects[i, 3]
        jlo = max(0, int(math.floor((sx - hx - x0) / resolution - 0.5)) - 1)
        jhi = min(n_cells - 1, int(math.ceil((sx + hx - x0) / resolution - 0.5)) + 1)
        ilo = max(0, int(math.floor((sy - hy - y0) / resolution - 0.5)) - 1)
        ihi = min(n_cells - 1, int(math.ceil((sy + hy - y0) / resolution - 0.5)) + 1)
        for ii in range(ilo, ihi + 1):
            cy = y0 + (ii + 0.5) * resolution
            if abs(cy - sy) > hy:
                continue
            for jj in range(jlo, jhi + 1):
                cx = x0 + (jj + 0.5) * resolution
                if abs(cx - sx) <= hx:
                    grid[ii, jj] = 1
    return grid


@njit(cache=True)
def human_velocities(hpos, hgoal, hvmax, circles, rects, d_sat, r_soc, w_goal, w_soc):
    n = hpos.shape[0]
    vel = np.zeros((n, 2), dtype=np.float64)
    for i in range(n):
        px = hpos[i, 0]
        py = hpos[i, 1]

        gx = hgoal[i, 0] - px
        gy = hgoal[i, 1] - py
        gd = math.hypot(gx, gy)
        if gd > 0.0:
            m = min(gd / d_sat, 1.0)
            fgx = gx / gd * m
            fgy = gy / gd * m
        else:
            fgx = 0.0
            fgy = 0.0

        fsx = 0.0
        fsy = 0.0
        # Repulsion from the other humans (never from the agent).
        for j in range(n):
            if j == i:
                continue
            dx = px - hpos[j, 0]
            dy = py - hpos[j, 1]
            d = math.hypot(dx, dy)
            if d >= r_soc:
                continue
            if d == 0.0:
                fsx += 1.0
            else:
                m = (r_soc - d) / r_soc
                fsx += dx / d * m
                fsy += dy / d * m
        # Repulsion from static shapes, measured to the closest surface point.
        for k in range(circles.shape[0]):
            dx = px - circles[k, 0]
            dy = py - circles[k, 1]
            d = math.hypot(dx, dy)
            sd = d - circles[k, 2]
            if sd >= r_soc:
                continue
            m = (r_soc - max(sd, 0.0)) / r_soc
            if d == 0.0:
                fsx += m
            else:
                fsx += dx / d * m
                fsy += dy / d * m
        for k in range(rects.shape[0]):
            lx = px - rects[k, 0]
            ly = py - rects[k, 1]
            hx = rects[k, 2]
            hy = rects[k, 3]
            dxo = abs(lx) - hx
            dyo = abs(ly) - hy
            if dxo > 0.0 or dyo > 0.0:
                ex = max(dxo, 0.0) * (1.0 if lx > 0.0 else -1.0)
                ey = max(dyo, 0.0) * (1.0 if ly > 0.0 else -1.0)
                sd = math.hypot(ex, ey)
                if sd >= r_soc:
                    continue
                m = (r_soc - sd) / r_soc
                fsx += ex / sd * m
                fsy += ey / sd * m
            else:
                # Inside (or on the boundary): push out through the nearest face.
                d0 = hx - lx
                d1 = hx + lx
                d2 = hy - ly
                d3 = hy + ly
                m = 1.0  # surface distance clamps to zero inside
                if d0 <= d1 and d0 <= d2 and d0 <= d3:
                    fsx += m
                elif d1 <= d2 and d1 <= d3:
                    fsx -= m
                elif d2 <= d3:
                    fsy += m
                else:
                    fsy -= m

        fx = w_goal * fgx + w_soc * fsx
        fy = w_goal * fgy + w_soc * fsy
        speed = math.hypot(fx, fy)
        if speed > 1.0:
            fx /= speed
            fy /= speed
        vel[i, 0] = hvmax[i] * fx
        vel[i, 1] = hvmax[i] * fy
    return vel
