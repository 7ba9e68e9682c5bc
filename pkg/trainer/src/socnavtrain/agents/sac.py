"""Soft actor-critic: twin critics, stochastic squashed policy, automatic
temperature tuned toward a -action_dim entropy target."""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from .base import BaseAgent
from .common import (
    ACTION_DIM,
    QCritic,
    ReplayBuffer,
    SquashedGaussianActor,
    encoder_parameters,
    hard_copy,
    soft_update,
)


class SACAgent(BaseAgent):
    paradigm = "sac"
    num_critics = 2

    def __init__(self, config, observation_spec, **kw):
        super().__init__(config, **kw)
        hp = self.hp
        hidden = hp.hidden
        self.actor = SquashedGaussianActor(self.latent_dim, hidden).to(self.device)
        self.critic1 = QCritic(self.latent_dim, hidden).to(self.device)
        self.critic2 = QCritic(self.latent_dim, hidden).to(self.device)
        self.target_critic1 = hard_copy(self.critic1)
        self.target_critic2 = hard_copy(self.critic2)

        self.log_alpha = torch.tensor(
            float(np.log(hp.init_alpha)), requires_grad=True, device=self.device
        )
        self.target_entropy = -float(ACTION_DIM)

        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=hp.actor_lr)
        groups = [
            {"params": self.critic1.parameters(), "lr": hp.critic_lr},
            {"params": self.critic2.parameters(), "lr": hp.critic_lr},
        ]
        if self.encoder_trainable:
            groups.append({"params": encoder_parameters(self.encoder), "lr": hp.encoder_lr})
        self.critic_opt = torch.optim.Adam(groups)
        self.alpha_opt = torch.optim.Adam([self.log_alpha], lr=hp.alpha_lr)
        self.buffer = ReplayBuffer(observation_spec, hp.buffer_capacity, seed=int(self.np_rng.integers(2**32)))

    @property
    def alpha(self) -> torch.Tensor:
        return self.log_alpha.exp()

    def act(self, obs_map, deterministic: bool = False) -> np.ndarray:
        latent = self._latent_single(obs_map)
        with torch.no_grad():
            action, _, mean_action = self.actor.sample(latent)
        chosen = mean_action if deterministic else action
        return self._clip_action(chosen.cpu().numpy()[0])

    def observe(self, obs, action, reward, next_obs, terminated, truncated) -> None:
        self.buffer.add(obs, action, reward, next_obs, terminated)
        self.total_env_steps += 1
        if self.total_env_steps >= self.hp.warmup_steps and self.buffer.size >= self.hp.batch_size:
            self._update()

    def _update(self) -> None:
        hp = self.hp
        batch = self.buffer.sample(hp.batch_size, self.device)

        with torch.no_grad():
            next_latent = self._encode(batch["next_obs"], grad=False)
            next_action, next_logp, _ = self.actor.sample(next_latent)
            target_q = torch.min(
                self.target_critic1(next_latent, next_action),
                self.target_critic2(next_latent, next_action),
            ) - self.alpha * next_logp
            y = batch["rewards"] + hp.gamma * (1.0 - batch["terminated"]) * target_q

        latent = self._encode(batch["obs"], grad=True)
        critic_loss = nn.functional.mse_loss(
            self.critic1(latent, batch["actions"]), y
        ) + nn.functional.mse_loss(self.critic2(latent, batch["actions"]), y)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        frozen_latent = latent.detach()
        action, logp, _ = self.actor.sample(frozen_latent)
        q = torch.min(self.critic1(frozen_latent, action), self.critic2(frozen_latent, action))
        actor_loss = (self.alpha.detach() * logp - q).mean()
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        alpha_loss = -(self.log_alpha * (logp.detach() + self.target_entropy)).mean()
        self.alpha_opt.zero_grad()
        alpha_loss.backward()
        self.alpha_opt.step()

        soft_update(self.target_critic1, self.critic1, hp.tau)
        soft_update(self.target_critic2, self.critic2, hp.tau)
        self.updates_done += 1
