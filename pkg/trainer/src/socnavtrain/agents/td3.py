"""Twin-critic deterministic policy gradient with delayed actor updates
and target-policy smoothing."""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from .base import BaseAgent
from .common import (
    DeterministicActor,
    QCritic,
    ReplayBuffer,
    encoder_parameters,
    hard_copy,
    soft_update,
)


class TD3Agent(BaseAgent):
    paradigm = "td3"
    num_critics = 2

    def __init__(self, config, observation_spec, **kw):
        super().__init__(config, **kw)
        hp = self.hp
        hidden = hp.hidden
        self.actor = DeterministicActor(self.latent_dim, hidden).to(self.device)
        self.critic1 = QCritic(self.latent_dim, hidden).to(self.device)
        self.critic2 = QCritic(self.latent_dim, hidden).to(self.device)
        self.target_actor = hard_copy(self.actor)
        self.target_critic1 = hard_copy(self.critic1)
        self.target_critic2 = hard_copy(self.critic2)

        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=hp.actor_lr)
        groups = [
            {"params": self.critic1.parameters(), "lr": hp.critic_lr},
            {"params": self.critic2.parameters(), "lr": hp.critic_lr},
        ]
        if self.encoder_trainable:
            groups.append({"params": encoder_parameters(self.encoder), "lr": hp.encoder_lr})
        self.critic_opt = torch.optim.Adam(groups)
        self.buffer = ReplayBuffer(observation_spec, hp.buffer_capacity, seed=int(self.np_rng.integers(2**32)))

    def act(self, obs_map, deterministic: bool = False) -> np.ndarray:
        with torch.no_grad():
            action = self.actor(self._latent_single(obs_map)).cpu().numpy()[0]
        if not deterministic:
            action = action + self.np_rng.normal(0.0, self.hp.exploration_noise, size=2)
        return self._clip_action(action)

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
            noise = torch.clamp(
                torch.randn_like(batch["actions"]) * hp.target_noise,
                -hp.noise_clip,
                hp.noise_clip,
            )
            next_action = torch.clamp(self.target_actor(next_latent) + noise, -1.0, 1.0)
            target_q = torch.min(
                self.target_critic1(next_latent, next_action),
                self.target_critic2(next_latent, next_action),
            )
            y = batch["rewards"] + hp.gamma * (1.0 - batch["terminated"]) * target_q

        latent = self._encode(batch["obs"], grad=True)
        critic_loss = nn.functional.mse_loss(
            self.critic1(latent, batch["actions"]), y
        ) + nn.functional.mse_loss(self.critic2(latent, batch["actions"]), y)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()
        self.updates_done += 1

        if self.updates_done % hp.policy_delay == 0:
            frozen_latent = latent.detach()
            actor_loss = -self.critic1(frozen_latent, self.actor(frozen_latent)).mean()
            self.actor_opt.zero_grad()
            actor_loss.backward()
            self.actor_opt.step()
            soft_update(self.target_critic1, self.critic1, hp.tau)
            soft_update(self.target_critic2, self.critic2, hp.tau)
            soft_update(self.target_actor, self.actor, hp.tau)
