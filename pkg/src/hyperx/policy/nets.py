"""Belief-conditioned actor-critic."""

import numpy as np

from ..errors import NumericError
from ..substrate import DenseNet, Linear, ParamStore
from ..substrate import autodiff as ad
from . import distributions as D


class PolicyNet:
    """pi(a | s, b) with a shared tanh trunk over embedded state and belief.

    The action head is categorical (logits) for discrete action spaces and a
    diagonal Gaussian with a learned state-independent log-std otherwise.
    Optional tanh squashes: `squash_mean` bounds the Gaussian mean before
    sampling; `squash_action` bounds the sampled action on its way to the
    environment (log-probs stay those of the pre-squash sample).
    """

    def __init__(self, obs_dim, belief_dim, cfg, rng, n_actions=None, action_dim=None,
                 dtype=np.float64):
        self.cfg = cfg
        self.n_actions = n_actions
        self.action_dim = action_dim if n_actions is None else n_actions
        self.squash_mean = cfg["norm_actions_pre_sampling"]
        self.squash_action = cfg["norm_actions_post_sampling"]
        self.store = ParamStore(dtype)
        scheme = cfg["policy_initialisation"]
        rngs = rng

        in_dim = 0
        self.state_embed = None
        if cfg["policy_state_embedding_dim"]:
            self.state_embed = Linear(self.store, "pi/embed_state", obs_dim,
                                      cfg["policy_state_embedding_dim"], rngs, scheme)
            in_dim += cfg["policy_state_embedding_dim"]
        else:
            in_dim += obs_dim
        self.belief_embed = None
        if cfg["policy_latent_embedding_dim"]:
            self.belief_embed = Linear(self.store, "pi/embed_belief", belief_dim,
                                       cfg["policy_latent_embedding_dim"], rngs, scheme)
            in_dim += cfg["policy_latent_embedding_dim"]
        else:
            in_dim += belief_dim

        widths = [in_dim] + list(cfg["policy_layers"])
        self.trunk = DenseNet(self.store, "pi/trunk", widths, rngs,
                              hidden_act=cfg["policy_activation_function"],
                              out_act=cfg["policy_activation_function"], scheme=scheme)
        feat = widths[-1]
        self.value_head = Linear(self.store, "pi/value", feat, 1, rngs, scheme, gain=1.0)
        if n_actions is not None:
            self.action_head = Linear(self.store, "pi/logits", feat, n_actions, rngs,
                                      scheme, gain=0.01)
            self.log_std = None
        else:
            self.action_head = Linear(self.store, "pi/mean", feat, action_dim, rngs,
                                      scheme, gain=0.01)
            init_log_std = cfg.get("policy_init_log_std", 0.0)
            self.log_std = self.store.register(
                "pi/log_std", np.full(action_dim, init_log_std, dtype=dtype))

    def _features(self, obs, belief, params):
        parts = []
        if self.state_embed is not None:
            parts.append(self.state_embed(obs, params, act="tanh"))
        else:
            parts.append(obs)
        if self.belief_embed is not None:
            parts.append(self.belief_embed(belief, params, act="tanh"))
        else:
            parts.append(belief)
        x = ad.concat(parts, axis=1)
        return self.trunk(x, params)

    def dist_and_value(self, obs, belief, params=True):
        feat = self._features(obs, belief, params)
        value = self.value_head(feat, params)
        head = self.action_head(feat, params)
        if self.log_std is None:
            return head, None, value
        mean = ad.tanh(head) if self.squash_mean else head
        log_std = self.log_std if params else self.log_std.data
        log_std = ad.clip(log_std, D.LOG_STD_MIN, D.LOG_STD_MAX)
        return mean, log_std, value

    def act(self, obs, belief, rng, mode="sample"):
        """Action selection on plain arrays.

        Returns (stored_action, env_action, log_prob, value): `stored_action`
        is what PPO ratios are computed against; `env_action` includes the
        post-sampling squash.
        """
        head, log_std, value = self.dist_and_value(obs, belief, params=False)
        if not np.isfinite(head).all():
            raise NumericError("non-finite policy head outputs")
        if self.n_actions is not None:
            if mode == "greedy":
                action = head.argmax(axis=1)
            else:
                action = D.categorical_sample(head, rng)
            log_prob = D.categorical_logprob(head, action)
            return action, action, log_prob[:, 0], value[:, 0]
        if mode == "greedy":
            action = head.copy()
        else:
            action = D.gaussian_sample(head, log_std, rng)
        log_prob = D.gaussian_logprob(head, log_std, action)
        env_action = np.tanh(action) if self.squash_action else action
        return action, env_action, log_prob[:, 0], value[:, 0]

    def evaluate_actions(self, obs, belief, actions):
        """Graph-mode log-probs / entropy / values for stored transitions."""
        head, log_std, value = self.dist_and_value(obs, belief, params=True)
        if self.n_actions is not None:
            log_prob = D.categorical_logprob(head, actions.astype(np.int64))
            entropy = ad.mean(D.categorical_entropy(head))
        else:
            log_prob = D.gaussian_logprob(head, log_std, actions)
            entropy = D.gaussian_entropy(log_std)
        return log_prob, entropy, value
