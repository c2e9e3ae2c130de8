"""Sparse directional point-mass: walk far enough to learn which way pays.

1-D surrogate for direction-conditioned locomotion. The task is a hidden
direction d in {-1, +1}. Velocity in the correct direction is rewarded only
outside the interval [-5, 5]; inside, the agent sees only its control cost,
so a single informative reward requires committing to one side, and the
optimal adaptation strategy is walk-out-then-turn-if-wrong.

The velocity dynamics carry strong friction: sustained force builds up a
cruising speed, while zero-mean action noise produces almost no net travel
(matching the property of locomotion benchmarks that undirected flailing
goes nowhere). Reaching the informative zone therefore requires deliberate,
persistent control rather than diffusion.
"""

import numpy as np

DT = 1.0
FRICTION = 0.95
VEL_GAIN = 0.015
V_MAX = 0.3
CONTROL_COST = 0.05
SPARSE_BOUND = 5.0
HORIZON = 200
ACTION_BOUND = 1.0

OBS_DIM = 2
ACTION_DIM = 1


def sample_tasks(rng, n):
    """Directions: uniform over {-1, +1}."""
    return rng.integers(0, 2, size=n) * 2.0 - 1.0


def reset_state(n):
    return np.zeros((n, 2))  # (x, v)


def step(state, action, direction):
    """Position integrates the old velocity, then the velocity decays and
    integrates the (clipped) force. Dense reward d*v applies at the new
    state when |x| > 5; the control cost always applies.
    """
    a = np.clip(action[:, 0], -ACTION_BOUND, ACTION_BOUND)
    x = state[:, 0] + state[:, 1] * DT
    v = np.clip(FRICTION * state[:, 1] + VEL_GAIN * a, -V_MAX, V_MAX)
    new_state = np.stack([x, v], axis=1)

    outside = np.abs(x) > SPARSE_BOUND
    reward = -CONTROL_COST * np.square(a)
    reward = reward + outside * direction * v

    info = {
        "outside": outside,
        "success": outside & (direction * v > 0),
        "action_clipped": np.abs(action[:, 0]) > ACTION_BOUND,
    }
    return new_state, reward, info
