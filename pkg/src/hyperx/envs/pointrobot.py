"""Sparse semicircle point navigation.

The goal is sampled on the border of a unit semicircle; the reward is
proximity-shaped but only inside a 0.2 goal radius (zero elsewhere). Tasks
run for several rollouts with the belief carried across, so a good agent
sweeps the semicircle once and then returns directly.
"""

import numpy as np

GOAL_RADIUS = 0.2
SEMICIRCLE_RADIUS = 1.0
HORIZON = 100
MAX_ROLLOUTS = 3
ACTION_BOUND = 0.1

OBS_DIM = 2
ACTION_DIM = 2


def sample_tasks(rng, n):
    ang = rng.uniform(0.0, np.pi, size=n)
    return np.stack([np.cos(ang), np.sin(ang)], axis=1) * SEMICIRCLE_RADIUS


def reset_state(n):
    return np.zeros((n, 2))


def step(pos, action, goal):
    clipped = np.clip(action, -ACTION_BOUND, ACTION_BOUND)
    new_pos = pos + clipped
    dist = np.linalg.norm(new_pos - goal, axis=1)
    inside = dist <= GOAL_RADIUS
    reward = np.where(inside, GOAL_RADIUS - dist, 0.0)
    info = {
        "success": inside,
        "action_clipped": np.any(np.abs(action) > ACTION_BOUND, axis=1),
    }
    return new_pos, reward, info
