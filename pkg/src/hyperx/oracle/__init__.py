"""Closed-form belief machinery for the sparse directional task.

The task prior is uniform over two directions, so the belief lives on a
2-simplex and has exactly three reachable values: [0.5, 0.5] before any
informative reward, and the absorbing posteriors [1, 0] (left) / [0, 1]
(right). A reward observed outside the sparse interval reveals d through
the sign of its velocity term.
"""

import numpy as np

from ..envs import sparsedir
from .dp import optimal_return

PRIOR = np.array([0.5, 0.5])
LEFT = np.array([1.0, 0.0])
RIGHT = np.array([0.0, 1.0])


def prior_belief(n):
    return np.tile(PRIOR, (n, 1))


def oracle_update(belief, x, reward, velocity, action):
    """Vectorized exact belief update from one observed transition.

    belief: (n, 2); x / velocity: post-transition position and velocity;
    reward: observed env reward; action: the force that produced it (its
    control cost is subtracted to isolate the direction term d * v).
    Inside [-5, 5], with zero velocity, or once resolved, the belief is
    unchanged; otherwise it resolves to the posterior matching sign(d).
    """
    belief = np.atleast_2d(np.asarray(belief, dtype=np.float64)).copy()
    x = np.atleast_1d(x)
    v = np.atleast_1d(velocity)
    a = np.atleast_1d(action)
    r = np.atleast_1d(reward)
    unresolved = belief[:, 0] == 0.5
    informative = (np.abs(x) > sparsedir.SPARSE_BOUND) & (v != 0.0)
    resolve = unresolved & informative
    if resolve.any():
        dense = r + sparsedir.CONTROL_COST * np.square(a)  # = d * v
        d = np.sign(dense) * np.sign(v)
        belief[resolve & (d < 0)] = LEFT
        belief[resolve & (d > 0)] = RIGHT
    return belief


def oracle_hyperstate(state, belief, state_idx=(0,)):
    """Exact hyper-state: selected state dims ++ belief simplex."""
    state = np.atleast_2d(state)
    belief = np.atleast_2d(belief)
    return np.concatenate([state[:, list(state_idx)], belief], axis=1)


__all__ = ["PRIOR", "LEFT", "RIGHT", "prior_belief", "oracle_update",
           "oracle_hyperstate", "optimal_return"]
