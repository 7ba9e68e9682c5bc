"""Shared agent machinery: replay buffer, network heads, hyperparameters."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from ..encoders import MultiModalEncoder

ACTION_DIM = 2


@dataclass
class HyperParams:
    gamma: float = 0.99
    buffer_capacity: int = 100_000
    batch_size: int = 256
    warmup_steps: int = 1_000
    actor_lr: float = 3e-4
    critic_lr: float = 3e-4
    encoder_lr: float = 3e-4
    tau: float = 0.005
    exploration_noise: float = 0.1
    # TD3
    policy_delay: int = 2
    target_noise: float = 0.2
    noise_clip: float = 0.5
    # SAC (temperature is auto-tuned toward -action_dim target entropy)
    alpha_lr: float = 3e-4
    init_alpha: float = 0.1
    # A2C
    n_steps: int = 5
    a2c_lr: float = 7e-4
    ent_coef: float = 0.01
    vf_coef: float = 0.5
    max_grad_norm: float = 0.5
    hidden: tuple[int, int] = (256, 256)


def default_hyperparams(paradigm: str) -> HyperParams:
    """Per-paradigm defaults, kept in one place."""
    base = HyperParams()
    if paradigm == "ddpg":
        base.actor_lr = 1e-4
        base.critic_lr = 1e-3
        base.encoder_lr = 1e-3
        base.batch_size = 128
    elif paradigm == "a2c":
        base.hidden = (128, 128)
    return base


def mlp(in_dim: int, hidden: tuple[int, ...], out_dim: int) -> nn.Sequential:
    layers: list[nn.Module] = []
    last = in_dim
    for width in hidden:
        layers += [nn.Linear(last, width), nn.ReLU()]
        last = width
    layers.append(nn.Linear(last, out_dim))
    return nn.Sequential(*layers)


class QCritic(nn.Module):
    def __init__(self, latent_dim: int, hidden: tuple[int, int]):
        super().__init__()
        self.net = mlp(latent_dim + ACTION_DIM, hidden, 1)

    def forward(self, latent: torch.Tensor, action: torch.Tensor) -> torch.Tensor:
        return self.net(torch.cat([latent, action], dim=1)).squeeze(-1)


class VCritic(nn.Module):
    def __init__(self, latent_dim: int, hidden: tuple[int, int]):
        super().__init__()
        self.net = mlp(latent_dim, hidden, 1)

    def forward(self, latent: torch.Tensor) -> torch.Tensor:
        return self.net(latent).squeeze(-1)


class DeterministicActor(nn.Module):
    def __init__(self, latent_dim: int, hidden: tuple[int, int]):
        super().__init__()
        self.net = mlp(latent_dim, hidden, ACTION_DIM)

    def forward(self, latent: torch.Tensor) -> torch.Tensor:
        return torch.tanh(self.net(latent))


class SquashedGaussianActor(nn.Module):
    """Tanh-squashed Gaussian policy with reparameterized sampling."""

    LOG_STD_MIN = -10.0
    LOG_STD_MAX = 2.0

    def __init__(self, latent_dim: int, hidden: tuple[int, int]):
        super().__init__()
        self.net = mlp(latent_dim, hidden, 2 * ACTION_DIM)

    def forward(self, latent: torch.Tensor):
        mu, log_std = self.net(latent).chunk(2, dim=1)
        log_std = torch.clamp(log_std, self.LOG_STD_MIN, self.LOG_STD_MAX)
        return mu, log_std

    def sample(self, latent: torch.Tensor):
        """Returns (action, log_prob, deterministic_action)."""
        mu, log_std = self(latent)
        std = log_std.exp()
        dist = torch.distributions.Normal(mu, std)
        pre_tanh = dist.rsample()
        action = torch.tanh(pre_tanh)
        log_prob = dist.log_prob(pre_tanh).sum(dim=1)
        # Change of variables for the tanh squash.
        log_prob -= (2.0 * (np.log(2.0) - pre_tanh - nn.functional.softplus(-2.0 * pre_tanh))).sum(dim=1)
        return action, log_prob, torch.tanh(mu)


class GaussianActor(nn.Module):
    """Gaussian policy with a state-independent log-std (used by A2C)."""

    def __init__(self, latent_dim: int, hidden: tuple[int, int]):
        super().__init__()
        self.net = mlp(latent_dim, hidden, ACTION_DIM)
        self.log_std = nn.Parameter(torch.full((ACTION_DIM,), -0.5))

    def dist(self, latent: torch.Tensor) -> torch.distributions.Normal:
        mean = torch.tanh(self.net(latent))
        return torch.distributions.Normal(mean, self.log_std.exp())


class ReplayBuffer:
    """Uniform-sampling transition store over named observation buffers."""

    def __init__(self, observation_spec: dict, capacity: int, seed: int):
        self.capacity = capacity
        self.size = 0
        self._next = 0
        self._rng = np.random.default_rng(seed)
        self._obs: dict[str, np.ndarray] = {}
        self._next_obs: dict[str, np.ndarray] = {}
        for key, (shape, dtype) in observation_spec.items():
            store_dtype = np.uint8 if dtype == np.uint8 else np.float32
            self._obs[key] = np.zeros((capacity, *shape), dtype=store_dtype)
            self._next_obs[key] = np.zeros((capacity, *shape), dtype=store_dtype)
        self._actions = np.zeros((capacity, ACTION_DIM), dtype=np.float32)
        self._rewards = np.zeros(capacity, dtype=np.float32)
        self._terminated = np.zeros(capacity, dtype=np.float32)

    def add(self, obs, action, reward, next_obs, terminated: bool) -> None:
        i = self._next
        for key, value in obs.items():
            self._obs[key][i] = value
        for key, value in next_obs.items():
            self._next_obs[key][i] = value
        self._actions[i] = action
        self._rewards[i] = reward
        self._terminated[i] = float(terminated)
        self._next = (self._next + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def sample(self, batch_size: int, device="cpu") -> dict:
        idx = self._rng.integers(0, self.size, batch_size)
        to_t = lambda a: torch.as_tensor(a, dtype=torch.get_default_dtype(), device=device)
        return {
            "obs": {k: to_t(v[idx]) for k, v in self._obs.items()},
            "next_obs": {k: to_t(v[idx]) for k, v in self._next_obs.items()},
            "actions": to_t(self._actions[idx]),
            "rewards": to_t(self._rewards[idx]),
            "terminated": to_t(self._terminated[idx]),
        }


def soft_update(target: nn.Module, source: nn.Module, tau: float) -> None:
    with torch.no_grad():
        for t, s in zip(target.parameters(), source.parameters()):
            t.mul_(1.0 - tau).add_(s, alpha=tau)


def hard_copy(module: nn.Module) -> nn.Module:
    import copy

    clone = copy.deepcopy(module)
    for p in clone.parameters():
        p.requires_grad_(False)
    return clone


def freeze(module: nn.Module) -> None:
    for p in module.parameters():
        p.requires_grad_(False)


def encoder_parameters(encoder: MultiModalEncoder):
    return [p for p in encoder.parameters() if p.requires_grad]
