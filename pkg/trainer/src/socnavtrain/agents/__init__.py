"""The four RL paradigms over the shared multi-modal latent."""

from __future__ import annotations

from socnavsim import ScenarioConfig

from ..encoders import EncoderSpec
from .a2c import A2CAgent
from .base import REGIMES, BaseAgent
from .common import HyperParams, ReplayBuffer, default_hyperparams
from .ddpg import DDPGAgent
from .sac import SACAgent
from .td3 import TD3Agent

PARADIGMS = {
    "sac": SACAgent,
    "td3": TD3Agent,
    "ddpg": DDPGAgent,
    "a2c": A2CAgent,
}


def build_agent(
    paradigm: str,
    config: ScenarioConfig,
    observation_spec: dict,
    regime: str = "scratch",
    encoder_spec: EncoderSpec | None = None,
    pretrained: dict | None = None,
    hp: HyperParams | None = None,
    seed: int = 0,
    device: str = "cpu",
) -> BaseAgent:
    if paradigm not in PARADIGMS:
        raise ValueError(f"unknown paradigm {paradigm!r}; valid: {sorted(PARADIGMS)}")
    cls = PARADIGMS[paradigm]
    return cls(
        config,
        observation_spec,
        encoder_spec=encoder_spec,
        regime=regime,
        pretrained=pretrained,
        hp=hp or default_hyperparams(paradigm),
        seed=seed,
        device=device,
    )


__all__ = [
    "A2CAgent",
    "BaseAgent",
    "DDPGAgent",
    "HyperParams",
    "PARADIGMS",
    "REGIMES",
    "ReplayBuffer",
    "SACAgent",
    "TD3Agent",
    "build_agent",
    "default_hyperparams",
]
