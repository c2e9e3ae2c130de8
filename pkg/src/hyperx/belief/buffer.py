"""Ring buffer of complete meta-episode trajectories."""

import numpy as np


class VaeBuffer:
    """Fixed-capacity FIFO over trajectories of identical length.

    Stores, per trajectory: previous observations, actions (encoder-ready,
    i.e. one-hot for discrete envs), rewards, and next observations, each
    time-major. Sampling is uniform over whatever is stored.
    """

    def __init__(self, capacity, steps, obs_dim, action_dim, dtype=np.float64):
        self.capacity = int(capacity)
        self.steps = steps
        self.prev_obs = np.zeros((self.capacity, steps, obs_dim), dtype=dtype)
        self.next_obs = np.zeros((self.capacity, steps, obs_dim), dtype=dtype)
        self.actions = np.zeros((self.capacity, steps, action_dim), dtype=dtype)
        self.rewards = np.zeros((self.capacity, steps, 1), dtype=dtype)
        self.count = 0
        self.ptr = 0

    def __len__(self):
        return min(self.count, self.capacity)

    def add(self, prev_obs, actions, rewards, next_obs):
        i = self.ptr
        self.prev_obs[i] = prev_obs
        self.actions[i] = actions
        self.rewards[i] = rewards.reshape(self.steps, 1)
        self.next_obs[i] = next_obs
        self.ptr = (self.ptr + 1) % self.capacity
        self.count += 1

    def sample(self, rng, batch_size):
        idx = rng.integers(0, len(self), size=batch_size)
        return (self.prev_obs[idx], self.actions[idx], self.rewards[idx], self.next_obs[idx])

    def state(self):
        n = len(self)
        return {
            "prev_obs": self.prev_obs[:n], "next_obs": self.next_obs[:n],
            "actions": self.actions[:n], "rewards": self.rewards[:n],
            "count": np.asarray(self.count), "ptr": np.asarray(self.ptr),
        }

    def load_state(self, state):
        n = int(np.asarray(state["count"]).item())
        k = min(n, self.capacity)
        self.prev_obs[:k] = state["prev_obs"]
        self.next_obs[:k] = state["next_obs"]
        self.actions[:k] = state["actions"]
        self.rewards[:k] = state["rewards"]
        self.count = n
        self.ptr = int(np.asarray(state["ptr"]).item())
