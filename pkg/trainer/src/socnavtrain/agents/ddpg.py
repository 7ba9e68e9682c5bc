"""Deterministic policy gradient with a single Q critic and target networks."""

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


class DDPGAgent(BaseAgent):
    paradigm = "ddpg"
    num_critics = 1

    def __init__(self, config, observation_spec, **kw):
        super().__init__(config, **kw)
        hp = self.hp
        hidden = hp.hidden
        self.actor = DeterministicActor(self.latent_dim, hidden).to(self.device)
        self.critic = QCritic(self.latent_dim, hidden).to(self.device)
        self.target_actor = hard_copy(self.actor)
        self.target_critic = hard_copy(self.critic)

        self.actor_opt = torch.optim.Adam(self.actor.parameters(), lr=hp.actor_lr)
        critic_groups = [{"params": self.critic.parameters(), "lr": hp.critic_lr}]
        if self.encoder_trainable:
            critic_groups.append({"params": encoder_parameters(self.encoder), "lr": hp.encoder_lr})
        self.critic_opt = torch.optim.Adam(critic_groups)
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
            target_q = self.target_critic(next_latent, self.target_actor(next_latent))
            y = batch["rewards"] + hp.gamma * (1.0 - batch["terminated"]) * target_q

        latent = self._encode(batch["obs"], grad=True)
        critic_loss = nn.functional.mse_loss(self.critic(latent, batch["actions"]), y)
        self.critic_opt.zero_grad()
        critic_loss.backward()
        self.critic_opt.step()

        frozen_latent = latent.detach()
        actor_loss = -self.critic(frozen_latent, self.actor(frozen_latent)).mean()
        self.actor_opt.zero_grad()
        actor_loss.backward()
        self.actor_opt.step()

        soft_update(self.target_critic, self.critic, hp.tau)
        soft_update(self.target_actor, self.actor, hp.tau)
        self.updates_done += 1
