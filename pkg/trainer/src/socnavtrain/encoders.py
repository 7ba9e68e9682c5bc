"""Modality encoders and concatenation fusion.

Each enabled modality gets its own branch: the occupancy grid goes through
a small conv stack, the raycast through fully connected layers, and the
low-dimensional inputs (relative goal, closest obstacle) through a fixed
radial-basis expansion that lifts them to a richer representation before
their fully connected layers.  Branch outputs are concatenated into the
latent vector every agent consumes; the latent width is exactly the sum of
the branch widths (no projection).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import torch
from torch import nn

from socnavsim import ScenarioConfig


@dataclass(frozen=True)
class EncoderSpec:
    grid_channels: tuple[int, int] = (8, 16)
    grid_latent: int = 64
    ray_hidden: int = 128
    ray_latent: int = 64
    rbf_centers: int = 32  # fixed Gaussian centers per input dimension
    lowdim_hidden: int = 64
    lowdim_latent: int = 32


class RBFExpansion(nn.Module):
    """Fixed (non-learned) Gaussian featurizer, one center grid per dimension.

    Centers are evenly spaced over each input's range with widths equal to
    the spacing, so the expansion is a deterministic lift from d inputs to
    d * centers features.
    """

    def __init__(self, bounds: list[tuple[float, float]], centers: int = 32):
        super().__init__()
        if centers < 2:
            raise ValueError("need at least 2 centers per dimension")
        grids = torch.stack(
            [torch.linspace(lo, hi, centers, dtype=torch.get_default_dtype()) for lo, hi in bounds]
        )  # (d, centers)
        widths = torch.tensor(
            [(hi - lo) / (centers - 1) for lo, hi in bounds], dtype=torch.get_default_dtype()
        )
        self.register_buffer("centers", grids)
        self.register_buffer("inv_two_sigma_sq", 1.0 / (2.0 * widths**2))
        self.in_dim = len(bounds)
        self.out_dim = len(bounds) * centers

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        # x: (B, d) -> (B, d * centers)
        diff = x.unsqueeze(-1) - self.centers  # (B, d, centers)
        feats = torch.exp(-(diff**2) * self.inv_two_sigma_sq.unsqueeze(-1))
        return feats.flatten(1)


class LowDimBranch(nn.Module):
    """RBF lift followed by fully connected layers."""

    def __init__(self, bounds: list[tuple[float, float]], spec: EncoderSpec):
        super().__init__()
        self.rbf = RBFExpansion(bounds, spec.rbf_centers)
        self.net = nn.Sequential(
            nn.Linear(self.rbf.out_dim, spec.lowdim_hidden),
            nn.ReLU(),
            nn.Linear(spec.lowdim_hidden, spec.lowdim_latent),
            nn.ReLU(),
        )
        self.out_dim = spec.lowdim_latent

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(self.rbf(x))


class RaycastBranch(nn.Module):
    def __init__(self, ray_count: int, max_range: float, spec: EncoderSpec):
        super().__init__()
        self.max_range = max_range
        self.net = nn.Sequential(
            nn.Linear(ray_count, spec.ray_hidden),
            nn.ReLU(),
            nn.Linear(spec.ray_hidden, spec.ray_latent),
            nn.ReLU(),
        )
        self.out_dim = spec.ray_latent

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.net(x / self.max_range)


def _conv_out(size: int) -> int:
    # Conv2d(kernel 3, stride 2, padding 1)
    return (size - 1) // 2 + 1


class GridBranch(nn.Module):
    """Conv stack over the binary occupancy grid, flattened to a flat latent."""

    def __init__(self, cells: int, spec: EncoderSpec):
        super().__init__()
        c1, c2 = spec.grid_channels
        self.conv = nn.Sequential(
            nn.Conv2d(1, c1, kernel_size=3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(c1, c2, kernel_size=3, stride=2, padding=1),
            nn.ReLU(),
        )
        side = _conv_out(_conv_out(cells))
        self.flat_dim = c2 * side * side
        self.head = nn.Sequential(nn.Linear(self.flat_dim, spec.grid_latent), nn.ReLU())
        self.out_dim = spec.grid_latent

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.dim() == 3:
            x = x.unsqueeze(1)  # (B, 1, n, n)
        return self.head(self.conv(x).flatten(1))


class GridDecoder(nn.Module):
    """Mirror of GridBranch for reconstruction pretraining; emits cell logits."""

    def __init__(self, cells: int, spec: EncoderSpec):
        super().__init__()
        c1, c2 = spec.grid_channels
        mid = _conv_out(cells)
        small = _conv_out(mid)
        self.small = small
        self.c2 = c2
        self.head = nn.Linear(spec.grid_latent, c2 * small * small)
        # output_padding recovers the exact pre-conv sizes
        op1 = mid - (2 * small - 1)
        op2 = cells - (2 * mid - 1)
        self.deconv = nn.Sequential(
            nn.ReLU(),
            nn.ConvTranspose2d(c2, c1, kernel_size=3, stride=2, padding=1, output_padding=op1),
            nn.ReLU(),
            nn.ConvTranspose2d(c1, 1, kernel_size=3, stride=2, padding=1, output_padding=op2),
        )

    def forward(self, latent: torch.Tensor) -> torch.Tensor:
        x = self.head(latent).view(-1, self.c2, self.small, self.small)
        return self.deconv(x).squeeze(1)  # (B, cells, cells) logits


class MultiModalEncoder(nn.Module):
    """Branch-per-modality encoder; the latent is the branch concatenation."""

    def __init__(self, config: ScenarioConfig, spec: EncoderSpec | None = None):
        super().__init__()
        spec = spec or EncoderSpec()
        self.spec = spec
        sensors = config.sensors
        diag = math.hypot(*config.arena)
        angle_bounds = (-math.pi, math.pi)

        self.branches = nn.ModuleDict()
        if "occupancy" in sensors.modalities:
            self.branches["occupancy"] = GridBranch(sensors.grid_cells, spec)
        if "raycast" in sensors.modalities:
            self.branches["raycast"] = RaycastBranch(sensors.ray_count, sensors.ray_max_range, spec)
        if "closest" in sensors.modalities:
            if sensors.closest_format == "polar":
                bounds = [(0.0, diag), angle_bounds]
            else:
                bounds = [(-diag, diag), (-diag, diag)]
            self.branches["closest"] = LowDimBranch(bounds, spec)
        # The relative goal is always observed and always gets a branch.
        self.branches["goal"] = LowDimBranch([(0.0, diag), angle_bounds], spec)

        self.latent_dim = sum(b.out_dim for b in self.branches.values())
        self._order = tuple(sorted(self.branches))

    def forward(self, obs: dict[str, torch.Tensor]) -> torch.Tensor:
        parts = [self.branches[name](obs[name]) for name in self._order]
        return torch.cat(parts, dim=1)


def obs_to_tensors(obs_map: dict, device="cpu") -> dict[str, torch.Tensor]:
    """Single observation map -> batch-of-one float tensors."""
    out = {}
    for key, value in obs_map.items():
        t = torch.as_tensor(value, dtype=torch.get_default_dtype(), device=device)
        out[key] = t.unsqueeze(0)
    return out
