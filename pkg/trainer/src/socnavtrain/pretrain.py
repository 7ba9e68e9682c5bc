"""Occupancy-grid encoder pretraining via a reconstruction autoencoder.

The decoder mirrors the conv branch; the objective is per-cell binary
cross entropy against the stored grids.  Saved weights carry the dataset's
config digest so a mismatched scenario is refused at load time.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import torch
from torch import nn

from socnavsim.dataset import read_all

from .encoders import EncoderSpec, GridBranch, GridDecoder


class GridAutoencoder(nn.Module):
    def __init__(self, cells: int, spec: EncoderSpec):
        super().__init__()
        self.encoder = GridBranch(cells, spec)
        self.decoder = GridDecoder(cells, spec)

    def forward(self, grids: torch.Tensor) -> torch.Tensor:
        return self.decoder(self.encoder(grids))


def load_dataset(path: str | Path) -> tuple[np.ndarray, bytes]:
    with open(path, "rb") as f:
        header, grids = read_all(f)
    if header.grid_rows != header.grid_cols:
        raise ValueError(f"expected square grids, got {header.grid_rows}x{header.grid_cols}")
    return grids, header.config_digest


def pretrain_encoder(
    dataset_path: str | Path,
    spec: EncoderSpec | None = None,
    epochs: int = 5,
    seed: int = 0,
    batch_size: int = 256,
    lr: float = 1e-3,
    holdout_fraction: float = 0.1,
    device: str = "cpu",
) -> dict:
    """Train the grid autoencoder; returns weights, loss curves, and metadata.

    Deterministic for a fixed seed (single-threaded torch recommended for
    bit equality).  The per-epoch training losses and a held-out loss are
    reported so pretraining progress is inspectable.
    """
    spec = spec or EncoderSpec()
    grids, digest = load_dataset(dataset_path)
    if len(grids) < 2:
        raise ValueError("dataset too small to pretrain on")
    cells = grids.shape[1]

    rng = np.random.default_rng(seed)
    torch.manual_seed(seed)
    order = rng.permutation(len(grids))
    n_hold = max(1, int(len(grids) * holdout_fraction))
    hold_idx, train_idx = order[:n_hold], order[n_hold:]

    model = GridAutoencoder(cells, spec).to(device)
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    loss_fn = nn.BCEWithLogitsLoss()

    def batch_tensor(idx) -> torch.Tensor:
        return torch.as_tensor(grids[idx], dtype=torch.get_default_dtype(), device=device)

    def holdout_loss() -> float:
        model.eval()
        with torch.no_grad():
            value = loss_fn(model(batch_tensor(hold_idx)), batch_tensor(hold_idx)).item()
        model.train()
        return value

    initial_holdout = holdout_loss()
    epoch_losses: list[float] = []
    for _ in range(epochs):
        perm = rng.permutation(train_idx)
        total, batches = 0.0, 0
        for start in range(0, len(perm), batch_size):
            batch = batch_tensor(perm[start : start + batch_size])
            loss = loss_fn(model(batch), batch)
            opt.zero_grad()
            loss.backward()
            opt.step()
            total += loss.item()
            batches += 1
        epoch_losses.append(total / batches)

    return {
        "encoder_state": model.encoder.state_dict(),
        "decoder_state": model.decoder.state_dict(),
        "spec": spec,
        "grid_cells": cells,
        "config_digest": digest.hex(),
        "train_losses": epoch_losses,
        "holdout_loss_before": initial_holdout,
        "holdout_loss_after": holdout_loss(),
        "seed": seed,
        "epochs": epochs,
    }


def save_pretrained(result: dict, path: str | Path) -> None:
    torch.save(result, path)


def load_pretrained(path: str | Path, expected_digest: bytes | None = None) -> dict:
    result = torch.load(path, weights_only=False)
    if expected_digest is not None and result["config_digest"] != expected_digest.hex():
        raise ValueError(
            "pretrained weights were produced from a different scenario config "
            f"(digest {result['config_digest'][:12]}.. != {expected_digest.hex()[:12]}..)"
        )
    return result
