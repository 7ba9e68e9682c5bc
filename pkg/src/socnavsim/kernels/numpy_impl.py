"""Pure-numpy fallback for the scene kernels.

Vectorized over rays/cells/shapes instead of compiled loops; same packed
array layout and the same arithmetic as the numba implementations.
"""

from __future__ import annotations

import numpy as np

_FACE_NORMALS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])


def raycast(ox, oy, dirs, circles, rects, max_range):
    n_rays = dirs.shape[0]
    best = np.full(n_rays, max_range, dtype=np.float64)

    if circles.shape[0]:
        f = np.array([ox, oy]) - circles[:, :2]  # (c, 2)
        b = dirs @ f.T  # (n, c)
        c0 = np.einsum("ij,ij->i", f, f) - circles[:, 2] ** 2  # (c,)
        disc = b * b - c0[None, :]
        root = np.sqrt(np.maximum(disc, 0.0))
        t_near = -b - root
        t_far = -b + root
        t = np.where(t_near >= 0.0, t_near, np.where(t_far >= 0.0, 0.0, np.inf))
        t[disc < 0.0] = np.inf
        np.minimum(best, t.min(axis=1), out=best)

    for k in range(rects.shape[0]):
        cx, cy, hx, hy = rects[k]
        t_min = np.full(n_rays, -np.inf)
        t_max = np.full(n_rays, np.inf)
        miss = np.zeros(n_rays, dtype=bool)
        for o, d, lo, hi in ((ox, dirs[:, 0], cx - hx, cx + hx), (oy, dirs[:, 1], cy - hy, cy + hy)):
            parallel = d == 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                t1 = (lo - o) / d
                t2 = (hi - o) / d
            swap = t1 > t2
            t1, t2 = np.where(swap, t2, t1), np.where(swap, t1, t2)
            t1[parallel] = -np.inf
            t2[parallel] = np.inf
            miss |= parallel & ((o < lo) | (o > hi))
            np.maximum(t_min, t1, out=t_min)
            np.minimum(t_max, t2, out=t_max)
        t = np.where(t_min >= 0.0, t_min, 0.0)
        t[miss | (t_max < t_min) | (t_max < 0.0)] = np.inf
        np.minimum(best, t, out=best)

    return best


def occupancy(ax, ay, n_cells, resolution, side, circles, rects):
    x0 = ax - side / 2.0
    y0 = ay - side / 2.0
    xs = x0 + (np.arange(n_cells) + 0.5) * resolution
    ys = y0 + (np.arange(n_cells) + 0.5) * resolution
    cx_grid = xs[None, :]
    cy_grid = ys[:, None]
    occ = np.zeros((n_cells, n_cells), dtype=bool)
    for k in range(circles.shape[0]):
        sx, sy, r = circles[k]
        occ |= (cx_grid - sx) ** 2 + (cy_grid - sy) ** 2 <= r * r
    for k in range(rects.shape[0]):
        sx, sy, hx, hy = rects[k]
        occ |= (np.abs(cx_grid - sx) <= hx) & (np.abs(cy_grid - sy) <= hy)
    return occ.astype(np.uint8)


def _rect_repulsion(pos, rects, r_soc):
    """Per-human repulsion sum from axis-aligned rectangles, (n, 2)."""
    n = pos.shape[0]
    total = np.zeros((n, 2))
    for k in range(rects.shape[0]):
        cx, cy, hx, hy = rects[k]
        lx = pos[:, 0] - cx
        ly = pos[:, 1] - cy
        dxo = np.abs(lx) - hx
        dyo = np.abs(ly) - hy
        outside = (dxo > 0.0) | (dyo > 0.0)

        ex = np.maximum(dxo, 0.0) * np.where(lx > 0.0, 1.0, -1.0)
        ey = np.maximum(dyo, 0.0) * np.where(ly > 0.0, 1.0, -1.0)
        sd = np.hypot(ex, ey)
        sd_safe = np.where(sd > 0.0, sd, 1.0)
        mag_out = np.where(sd < r_soc, (r_soc - sd) / r_soc, 0.0)
        contrib_out = np.stack([ex / sd_safe, ey / sd_safe], axis=1) * mag_out[:, None]

        # Inside: unit push along the outward normal of the nearest face.
        faces = np.stack([hx - lx, hx + lx, hy - ly, hy + ly], axis=1)
        contrib_in = _FACE_NORMALS[np.argmin(faces, axis=1)]

        total += np.where(outside[:, None], contrib_out, contrib_in)
    return total


def human_velocities(hpos, hgoal, hvmax, circles, rects, d_sat, r_soc, w_goal, w_soc):
    n = hpos.shape[0]
    if n == 0:
        return np.zeros((0, 2))

    delta = hgoal - hpos
    gd = np.hypot(delta[:, 0], delta[:, 1])
    gd_safe = np.where(gd > 0.0, gd, 1.0)
    f_goal = delta / gd_safe[:, None] * np.minimum(gd / d_sat, 1.0)[:, None]
    f_goal[gd == 0.0] = 0.0

    f_soc = np.zeros((n, 2))
    if n > 1:
        diff = hpos[:, None, :] - hpos[None, :, :]  # (n, n, 2)
        dist = np.hypot(diff[..., 0], diff[..., 1])
        off_diag = ~np.eye(n, dtype=bool)
        coincident = (dist == 0.0) & off_diag
        dist_safe = np.where(dist > 0.0, dist, 1.0)
        mag = np.where(off_diag & (dist < r_soc), (r_soc - dist) / r_soc, 0.0)
        contrib = diff / dist_safe[..., None] * mag[..., None]
        contrib[coincident] = (1.0, 0.0)
        f_soc += contrib.sum(axis=1)

    if circles.shape[0]:
        dvec = hpos[:, None, :] - circles[None, :, :2]  # (n, c, 2)
        d = np.hypot(dvec[..., 0], dvec[..., 1])
        sd = d - circles[None, :, 2]
        d_safe = np.where(d > 0.0, d, 1.0)
        mag = np.where(sd < r_soc, (r_soc - np.maximum(sd, 0.0)) / r_soc, 0.0)
        contrib = dvec / d_safe[..., None] * mag[..., None]
        contrib[(d == 0.0)] = 0.0
        contrib[(d == 0.0), 0] = 1.0  # center tie resolves +x at unit magnitude
        f_soc += contrib.sum(axis=1)

    if rects.shape[0]:
        f_soc += _rect_repulsion(hpos, rects, r_soc)

    force = w_goal * f_goal + w_soc * f_soc
    speed = np.hypot(force[:, 0], force[:, 1])
    scale = np.where(speed > 1.0, 1.0 / np.where(speed > 0, speed, 1.0), 1.0)
    return hvmax[:, None] * force * scale[:, None]
