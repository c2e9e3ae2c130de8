"""Fixed-horizon on-policy storage and generalized advantage estimation."""

import numpy as np


class RolloutBuffer:
    """Time-major storage for `num_steps` transitions from n parallel workers.

    masks[t+1] = 0 where the task ended at transition t; bad_masks[t+1] = 0
    where that ending was a time-limit truncation (with proper-time-limit
    handling the truncated step's advantage collapses to zero instead of
    treating the cutoff as a true terminal).
    """

    def __init__(self, num_steps, n, obs_dim, belief_dim, action_dim, discrete):
        T = num_steps
        self.num_steps = T
        self.n = n
        self.obs = np.zeros((T, n, obs_dim))
        self.beliefs = np.zeros((T, n, belief_dim))
        if discrete:
            self.actions = np.zeros((T, n), dtype=np.int64)
        else:
            self.actions = np.zeros((T, n, action_dim))
        self.log_probs = np.zeros((T, n))
        self.values = np.zeros((T, n))
        self.rewards = np.zeros((T, n))       # combined training reward
        self.raw_rewards = np.zeros((T, n))   # extrinsic, for diagnostics
        self.r_hyper = np.zeros((T, n))
        self.r_error = np.zeros((T, n))
        self.masks = np.ones((T + 1, n))
        self.bad_masks = np.ones((T + 1, n))
        self.step = 0

    def insert(self, obs, beliefs, actions, log_probs, values, rewards,
               raw_rewards, r_hyper, r_error, done, truncated):
        t = self.step
        self.obs[t] = obs
        self.beliefs[t] = beliefs
        self.actions[t] = actions
        self.log_probs[t] = log_probs
        self.values[t] = values
        self.rewards[t] = rewards
        self.raw_rewards[t] = raw_rewards
        self.r_hyper[t] = r_hyper
        self.r_error[t] = r_error
        self.masks[t + 1] = 1.0 - done
        self.bad_masks[t + 1] = 1.0 - truncated
        self.step += 1

    @property
    def full(self):
        return self.step == self.num_steps

    def reset(self):
        self.step = 0
        self.masks[0] = self.masks[-1]
        self.bad_masks[0] = self.bad_masks[-1]

    def compute_returns(self, bootstrap_value, gamma, tau, use_gae=True,
                        use_proper_time_limits=False):
        """GAE over the stored horizon. Returns (advantages, returns)."""
        T, n = self.num_steps, self.n
        adv = np.zeros((T, n))
        values = np.concatenate([self.values, bootstrap_value[None, :]], axis=0)
        if use_gae:
            gae = np.zeros(n)
            for t in reversed(range(T)):
                delta = self.rewards[t] + gamma * values[t + 1] * self.masks[t + 1] - values[t]
                gae = delta + gamma * tau * self.masks[t + 1] * gae
                if use_proper_time_limits:
                    gae = gae * self.bad_masks[t + 1]
                adv[t] = gae
            returns = adv + self.values
        else:
            returns = np.zeros((T, n))
            ret = values[-1]
            for t in reversed(range(T)):
                ret = self.rewards[t] + gamma * self.masks[t + 1] * ret
                if use_proper_time_limits:
                    ret = ret * self.bad_masks[t + 1] + (1.0 - self.bad_masks[t + 1]) * values[t]
                returns[t] = ret
            adv = returns - self.values
        return adv, returns

    def flat(self):
        """Flatten (T, n, ...) -> (T*n, ...) views for minibatching."""
        out = {
            "obs": self.obs.reshape(-1, self.obs.shape[-1]),
            "beliefs": self.beliefs.reshape(-1, self.beliefs.shape[-1]),
            "log_probs": self.log_probs.reshape(-1),
            "values": self.values.reshape(-1),
        }
        if self.actions.ndim == 2:
            out["actions"] = self.actions.reshape(-1)
        else:
            out["actions"] = self.actions.reshape(-1, self.actions.shape[-1])
        return out
