"""Meta-episode machinery shared by all environments.

A task runs for H+ = horizon * max_rollouts steps. The environment state
resets at rollout boundaries inside a task; the task parameters (and, in
the agent, the belief) persist until the task is resampled. All simulation
is vectorized over n parallel instances.
"""

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import gridworld, pointrobot, sparsedir, treasure


@dataclass
class EnvSpec:
    env_id: str
    obs_dim: int
    n_actions: int | None      # discrete action count, None for continuous
    action_dim: int            # continuous action dims (1 for discrete)
    action_bound: float | None
    horizon: int
    max_rollouts: int
    task_dim: int
    reward_varying_only: bool  # transitions identical across tasks
    extra: dict = field(default_factory=dict)

    @property
    def steps_per_task(self):
        return self.horizon * self.max_rollouts

    @property
    def discrete(self):
        return self.n_actions is not None


class _Treasure:
    spec = EnvSpec(
        "treasure", treasure.OBS_DIM, None, treasure.ACTION_DIM,
        treasure.ACTION_BOUND, treasure.HORIZON, 1, 2,
        reward_varying_only=False,
        extra={"circle_radius": treasure.CIRCLE_RADIUS,
               "mountain_radius": treasure.MOUNTAIN_RADIUS},
    )
    sample_tasks = staticmethod(treasure.sample_tasks)

    def reset(self, n):
        return treasure.reset_state(n)

    def observe(self, state, task):
        return treasure.observe(state, task)

    def step(self, state, action, task):
        return treasure.step(state, action, task)


class _Gridworld:
    spec = EnvSpec(
        "gridworld", gridworld.OBS_DIM, gridworld.N_ACTIONS, 1, None,
        gridworld.HORIZON, 1, 6,
        reward_varying_only=True,
        extra={"width": gridworld.WIDTH, "height": gridworld.HEIGHT},
    )

    @staticmethod
    def sample_tasks(rng, n):
        return gridworld.sample_tasks(rng, n).reshape(n, 6).astype(np.float64)

    def reset(self, n):
        pos, stage = gridworld.reset_state(n)
        return np.concatenate([pos, stage[:, None]], axis=1)  # stage rides along as hidden state

    def observe(self, state, task):
        return state[:, :2].astype(np.float64)

    def step(self, state, action, task):
        goals = task.astype(np.int64).reshape(len(task), 3, 2)
        pos = state[:, :2].astype(np.int64)
        stage = state[:, 2].astype(np.int64)
        new_pos, new_stage, reward, info = gridworld.step(pos, stage, action.astype(np.int64), goals)
        new_state = np.concatenate([new_pos, new_stage[:, None]], axis=1).astype(np.float64)
        return new_state, reward, info


class _SparseDir:
    spec = EnvSpec(
        "sparsedir", sparsedir.OBS_DIM, None, sparsedir.ACTION_DIM,
        sparsedir.ACTION_BOUND, sparsedir.HORIZON, 1, 1,
        reward_varying_only=True,
        extra={"sparse_bound": sparsedir.SPARSE_BOUND, "dt": sparsedir.DT,
               "v_max": sparsedir.V_MAX, "control_cost": sparsedir.CONTROL_COST},
    )

    @staticmethod
    def sample_tasks(rng, n):
        return sparsedir.sample_tasks(rng, n)[:, None]

    def reset(self, n):
        return sparsedir.reset_state(n)

    def observe(self, state, task):
        return state.copy()

    def step(self, state, action, task):
        return sparsedir.step(state, action, task[:, 0])


class _PointRobot:
    spec = EnvSpec(
        "pointrobot", pointrobot.OBS_DIM, None, pointrobot.ACTION_DIM,
        pointrobot.ACTION_BOUND, pointrobot.HORIZON, pointrobot.MAX_ROLLOUTS, 2,
        reward_varying_only=True,
        extra={"goal_radius": pointrobot.GOAL_RADIUS},
    )
    sample_tasks = staticmethod(pointrobot.sample_tasks)

    def reset(self, n):
        return pointrobot.reset_state(n)

    def observe(self, state, task):
        return state.copy()

    def step(self, state, action, task):
        return pointrobot.step(state, action, task)


_BACKENDS = {
    "treasure": _Treasure,
    "gridworld": _Gridworld,
    "sparsedir": _SparseDir,
    "pointrobot": _PointRobot,
}


def env_ids():
    return sorted(_BACKENDS)


def get_spec(env_id):
    try:
        return _BACKENDS[env_id].spec
    except KeyError:
        raise ConfigError("unknown environment id %r (known: %s)" % (env_id, env_ids()))


def sample_task(env_id, rng):
    """Draw a single task parameter vector from the environment's prior."""
    backend = _BACKENDS.get(env_id)
    if backend is None:
        raise ConfigError("unknown environment id %r (known: %s)" % (env_id, env_ids()))
    return backend.sample_tasks(rng, 1)[0]


class BatchMetaEnv:
    """n parallel task instances with meta-episode bookkeeping.

    step() auto-resets environment state at rollout boundaries inside a
    task and reports `task_done` when H+ steps have elapsed; resampling
    tasks (and resetting the agent's belief) is the caller's job, via
    reset_tasks().
    """

    def __init__(self, env_id, n, rng, max_rollouts=None):
        if env_id not in _BACKENDS:
            raise ConfigError("unknown environment id %r (known: %s)" % (env_id, env_ids()))
        self.backend = _BACKENDS[env_id]()
        self.spec = self.backend.spec
        if max_rollouts is not None:
            self.spec = EnvSpec(**{**self.spec.__dict__, "max_rollouts": max_rollouts})
        self.n = n
        self.rng = rng
        self.tasks = None
        self.state = None
        self.t_in_rollout = np.zeros(n, dtype=np.int64)
        self.rollout_idx = np.zeros(n, dtype=np.int64)

    def reset_tasks(self, mask=None, tasks=None):
        """Resample tasks where mask (default: everywhere) and reset state."""
        if self.tasks is None:
            self.tasks = self.backend.sample_tasks(self.rng, self.n)
            self.state = self.backend.reset(self.n)
            mask = np.ones(self.n, dtype=bool)
        if mask is None:
            mask = np.ones(self.n, dtype=bool)
        if tasks is not None:
            self.tasks[mask] = tasks[mask]
        else:
            fresh = self.backend.sample_tasks(self.rng, self.n)
            self.tasks[mask] = fresh[mask]
        fresh_state = self.backend.reset(self.n)
        self.state[mask] = fresh_state[mask]
        self.t_in_rollout[mask] = 0
        self.rollout_idx[mask] = 0
        return self.observe()

    def observe(self):
        return self.backend.observe(self.state, self.tasks)

    def native_action(self, action):
        if self.spec.discrete:
            return action
        return action * self.spec.action_bound

    def step(self, action):
        """Returns (obs, trans_next_obs, reward, rollout_done, task_done, info).

        `trans_next_obs` is the observation at the post-transition state
        (what belief inference consumes); `obs` is what the policy sees
        next, i.e. the reset observation at rollout boundaries.
        """
        new_state, reward, info = self.backend.step(self.state, self.native_action(action), self.tasks)
        if not np.isfinite(new_state).all() or not np.isfinite(reward).all():
            raise FloatingPointError("environment produced non-finite values")
        self.state = new_state
        trans_next_obs = self.backend.observe(self.state, self.tasks)

        self.t_in_rollout += 1
        rollout_done = self.t_in_rollout >= self.spec.horizon
        task_done = rollout_done & (self.rollout_idx >= self.spec.max_rollouts - 1)
        inner_reset = rollout_done & ~task_done
        if inner_reset.any():
            fresh = self.backend.reset(self.n)
            self.state[inner_reset] = fresh[inner_reset]
            self.t_in_rollout[inner_reset] = 0
            self.rollout_idx[inner_reset] += 1
        obs = self.backend.observe(self.state, self.tasks)
        return obs, trans_next_obs, reward, rollout_done, task_done, info
