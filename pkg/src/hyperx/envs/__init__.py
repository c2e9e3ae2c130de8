from . import gridworld, pointrobot, scripted, sparsedir, treasure
from .meta import BatchMetaEnv, EnvSpec, env_ids, get_spec, sample_task

# step functions under their operation names
treasure_step = treasure.step
gridworld_step = gridworld.step
sparsedir_step = sparsedir.step
pointrobot_step = pointrobot.step

__all__ = [
    "BatchMetaEnv", "EnvSpec", "env_ids", "get_spec", "sample_task",
    "treasure", "gridworld", "sparsedir", "pointrobot", "scripted",
    "treasure_step", "gridworld_step", "sparsedir_step", "pointrobot_step",
]
