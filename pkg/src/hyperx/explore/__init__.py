from .bonus import BonusSchedule, combine_rewards
from .rnd import HyperStateBuffer, RndPair, hyper_bonus, rnd_update

__all__ = [
    "BonusSchedule", "combine_rewards", "HyperStateBuffer", "RndPair",
    "hyper_bonus", "rnd_update",
]
