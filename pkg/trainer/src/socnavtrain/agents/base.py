"""Agent base: encoder construction, pretraining regimes, action plumbing.

Every paradigm consumes the same fused latent.  The encoder is updated by
critic (or joint, for the on-policy agent) gradients only; actor losses
see a detached latent.  Under the frozen regime no encoder parameter ever
receives an update.
"""

from __future__ import annotations

import numpy as np
import torch

from socnavsim import ScenarioConfig

from ..encoders import EncoderSpec, MultiModalEncoder, obs_to_tensors
from .common import HyperParams, freeze

REGIMES = ("scratch", "finetuned", "frozen")


class BaseAgent:
    paradigm = "base"

    def __init__(
        self,
        config: ScenarioConfig,
        encoder_spec: EncoderSpec | None = None,
        regime: str = "scratch",
        pretrained: dict | None = None,
        hp: HyperParams | None = None,
        seed: int = 0,
        device: str = "cpu",
    ):
        if regime not in REGIMES:
            raise ValueError(f"unknown encoder regime {regime!r}; valid: {REGIMES}")
        torch.manual_seed(seed & 0xFFFFFFFF)
        self.np_rng = np.random.default_rng(seed)
        self.config = config
        self.hp = hp or HyperParams()
        self.device = device
        self.regime = regime
        self.total_env_steps = 0
        self.updates_done = 0

        self.encoder = MultiModalEncoder(config, encoder_spec).to(device)
        if regime in ("finetuned", "frozen"):
            if pretrained is None:
                raise ValueError(f"the {regime} regime requires pretrained encoder weights")
            if "occupancy" not in self.encoder.branches:
                raise ValueError("pretrained weights cover the occupancy branch; enable that modality")
            if pretrained["grid_cells"] != config.sensors.grid_cells:
                raise ValueError(
                    f"pretrained grid geometry {pretrained['grid_cells']} does not match "
                    f"the configured {config.sensors.grid_cells} cells"
                )
            self.encoder.branches["occupancy"].load_state_dict(pretrained["encoder_state"])
        if regime == "frozen":
            freeze(self.encoder)
        self.encoder_trainable = regime != "frozen"

    # -- latent helpers -------------------------------------------------
    def _encode(self, obs_batch: dict, grad: bool) -> torch.Tensor:
        if grad and self.encoder_trainable:
            return self.encoder(obs_batch)
        with torch.no_grad():
            return self.encoder(obs_batch)

    def _latent_single(self, obs_map: dict) -> torch.Tensor:
        with torch.no_grad():
            return self.encoder(obs_to_tensors(obs_map, self.device))

    @property
    def latent_dim(self) -> int:
        return self.encoder.latent_dim

    # -- protocol hooks --------------------------------------------------
    def act(self, obs_map: dict, deterministic: bool = False) -> np.ndarray:
        raise NotImplementedError

    def observe(self, obs, action, reward, next_obs, terminated: bool, truncated: bool) -> None:
        raise NotImplementedError

    def encoder_state_bytes(self) -> bytes:
        """Serialized encoder parameters, for bit-identity checks."""
        import io

        buf = io.BytesIO()
        torch.save({k: v.clone() for k, v in self.encoder.state_dict().items()}, buf)
        return buf.getvalue()

    @staticmethod
    def _clip_action(action: np.ndarray) -> np.ndarray:
        return np.clip(action, -1.0, 1.0)
