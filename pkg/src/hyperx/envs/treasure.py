"""Treasure-on-a-circle navigation with a viewpoint mountain.

A treasure sits somewhere on the unit circle. Inside is a mountain (disk of
radius 0.5) whose top reveals the treasure's coordinates in the observation;
climbing it costs more than the ordinary time penalty, so looking is a
short-term loss that pays off through one-shot navigation.
"""

import numpy as np

CIRCLE_RADIUS = 1.0
MOUNTAIN_RADIUS = 0.5
TOP_RADIUS = 0.1          # observation reveals the treasure within this distance of the center
TREASURE_RADIUS = 0.1     # reward radius around the treasure
TREASURE_REWARD = 10.0
TIME_PENALTY = -5.0
POS_BOUND = 1.5
ACTION_BOUND = 0.1
HORIZON = 100

OBS_DIM = 4
ACTION_DIM = 2


def sample_tasks(rng, n):
    """Treasure positions: uniform angle on the circle."""
    ang = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.stack([np.cos(ang), np.sin(ang)], axis=1) * CIRCLE_RADIUS


def reset_state(n):
    """Start at the bottom of the circle."""
    pos = np.zeros((n, 2))
    pos[:, 1] = -CIRCLE_RADIUS
    return pos


def observe(pos, treasure):
    dist_center = np.linalg.norm(pos, axis=1)
    on_top = dist_center <= TOP_RADIUS
    obs = np.concatenate([pos, treasure * on_top[:, None]], axis=1)
    return obs


def step(pos, action, treasure):
    """One vectorized transition. Returns (next_pos, reward, info dict).

    Reward precedence at the new position: treasure > mountain > time
    penalty, where the time penalty is -5 - max(0, |pos| - 1) (grows past
    the outer circle).
    """
    clipped = np.clip(action, -ACTION_BOUND, ACTION_BOUND)
    action_clipped = np.any(clipped != action, axis=1)
    new_pos = np.clip(pos + clipped, -POS_BOUND, POS_BOUND)

    dist_center = np.linalg.norm(new_pos, axis=1)
    dist_treasure = np.linalg.norm(new_pos - treasure, axis=1)
    at_treasure = dist_treasure <= TREASURE_RADIUS
    on_mountain = dist_center <= MOUNTAIN_RADIUS

    reward = TIME_PENALTY - np.maximum(0.0, dist_center - CIRCLE_RADIUS)
    reward = np.where(on_mountain, -5.5 + dist_center, reward)
    reward = np.where(at_treasure, TREASURE_REWARD, reward)

    info = {
        "on_mountain": on_mountain,
        "on_top": dist_center <= TOP_RADIUS,
        "success": at_treasure,
        "action_clipped": action_clipped,
    }
    return new_pos, reward, info
