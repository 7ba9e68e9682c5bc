"""Synchronous single-worker advantage actor-critic with n-step rollouts."""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from ..encoders import obs_to_tensors
from .base import BaseAgent
from .common import GaussianActor, VCritic, encoder_parameters


class A2CAgent(BaseAgent):
    paradigm = "a2c"
    num_critics = 1

    def __init__(self, config, observation_spec, **kw):
        super().__init__(config, **kw)
        hp = self.hp
        self.actor = GaussianActor(self.latent_dim, hp.hidden).to(self.device)
        self.critic = VCritic(self.latent_dim, hp.hidden).to(self.device)
        params = list(self.actor.parameters()) + list(self.critic.parameters())
        if self.encoder_trainable:
            params += encoder_parameters(self.encoder)
        self.opt = torch.optim.Adam(params, lr=hp.a2c_lr)
        self._rollout: list[tuple] = []

    def act(self, obs_map, deterministic: bool = False) -> np.ndarray:
        latent = self._latent_single(obs_map)
        with torch.no_grad():
            dist = self.actor.dist(latent)
            action = dist.mean if deterministic else dist.sample()
        return self._clip_action(action.cpu().numpy()[0])

    def observe(self, obs, action, reward, next_obs, terminated, truncated) -> None:
        self._rollout.append((obs, np.asarray(action, dtype=np.float32), float(reward), terminated))
        self.total_env_steps += 1
        done = terminated or truncated
        if len(self._rollout) >= self.hp.n_steps or done:
            self._update(next_obs, terminated)
            self._rollout.clear()

    def _stack_obs(self, maps: list[dict]) -> dict[str, torch.Tensor]:
        keys = maps[0].keys()
        return {
            k: torch.as_tensor(
                np.stack([m[k] for m in maps]), dtype=torch.get_default_dtype(), device=self.device
            )
            for k in keys
        }

    def _update(self, last_next_obs: dict, last_terminated: bool) -> None:
        hp = self.hp
        obs_batch = self._stack_obs([t[0] for t in self._rollout])
        actions = torch.as_tensor(
            np.stack([t[1] for t in self._rollout]), dtype=torch.get_default_dtype(), device=self.device
        )
        rewards = [t[2] for t in self._rollout]

        # Bootstrap from the value of the state after the rollout unless the
        # episode genuinely terminated there (truncation still bootstraps).
        with torch.no_grad():
            if last_terminated:
                running = 0.0
            else:
                next_latent = self.encoder(obs_to_tensors(last_next_obs, self.device))
                running = float(self.critic(next_latent).item())
        returns = []
        for r in reversed(rewards):
            running = r + hp.gamma * running
            returns.append(running)
        returns_t = torch.tensor(list(reversed(returns)), dtype=torch.get_default_dtype(), device=self.device)

        latent = self._encode(obs_batch, grad=True)
        values = self.critic(latent)
        dist = self.actor.dist(latent)
        log_prob = dist.log_prob(actions).sum(dim=1)
        entropy = dist.entropy().sum(dim=1)
        advantage = returns_t - values.detach()

        policy_loss = -(log_prob * advantage).mean()
        value_loss = nn.functional.mse_loss(values, returns_t)
        loss = policy_loss + hp.vf_coef * value_loss - hp.ent_coef * entropy.mean()

        self.opt.zero_grad()
        loss.backward()
        nn.utils.clip_grad_norm_(
            [p for group in self.opt.param_groups for p in group["params"]], hp.max_grad_norm
        )
        self.opt.step()
        self.updates_done += 1
