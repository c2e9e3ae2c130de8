from . import distributions
from .buffer import RolloutBuffer
from .nets import PolicyNet
from .ppo import PPO

__all__ = ["distributions", "RolloutBuffer", "PolicyNet", "PPO"]
