"""Training harness for the socnavsim environment.

Multi-modal encoders with concatenation fusion, four continuous-control
RL paradigms (SAC, TD3, DDPG, A2C) over the shared latent, occupancy-grid
encoder pretraining, and the interleaved train/eval protocol.
"""

from .agents import PARADIGMS, build_agent, default_hyperparams
from .bridge import EnvHandle, make_env, make_env_from_file
from .encoders import EncoderSpec, MultiModalEncoder, RBFExpansion
from .pretrain import load_pretrained, pretrain_encoder, save_pretrained
from .protocol import TrainProtocol, aggregate_runs, plot_curves, train, train_run

__version__ = "0.1.0"

__all__ = [
    "EncoderSpec",
    "EnvHandle",
    "MultiModalEncoder",
    "PARADIGMS",
    "RBFExpansion",
    "TrainProtocol",
    "aggregate_runs",
    "build_agent",
    "default_hyperparams",
    "load_pretrained",
    "make_env",
    "make_env_from_file",
    "plot_curves",
    "pretrain_encoder",
    "save_pretrained",
    "train",
    "train_run",
    "__version__",
]
