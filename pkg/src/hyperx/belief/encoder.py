"""Recurrent variational encoder over interaction histories.

Each transition token (next observation, previous action, reward) is
embedded, pushed through a GRU, and two linear heads read out the mean and
log-variance of a diagonal Gaussian over the latent task embedding. The
belief before any transition comes from one step on a zero token, so the
learned prior can adapt during training.
"""

from dataclasses import dataclass

import numpy as np

from ..substrate import DenseNet, GRUCell, Linear
from ..substrate import autodiff as ad

LOGVAR_CLAMP = 10.0


@dataclass
class LatentBelief:
    """Gaussian posterior (mu, logvar) plus the recurrent hidden state."""

    mu: np.ndarray
    logvar: np.ndarray
    h: np.ndarray

    def policy_vec(self):
        """Representation the policy and novelty bonus condition on."""
        return np.concatenate([self.mu, self.logvar], axis=1)


class BeliefEncoder:
    def __init__(self, store, obs_dim, action_dim, latent_dim, cfg, rng):
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.latent_dim = latent_dim
        self.state_embed = Linear(store, "enc/embed_state", obs_dim,
                                  cfg["state_embedding_size"], rng, "normal")
        self.action_embed = None
        if cfg["action_embedding_size"] > 0:
            self.action_embed = Linear(store, "enc/embed_action", action_dim,
                                       cfg["action_embedding_size"], rng, "normal")
        self.reward_embed = None
        if cfg["reward_embedding_size"] > 0:
            self.reward_embed = Linear(store, "enc/embed_reward", 1,
                                       cfg["reward_embedding_size"], rng, "normal")
        in_dim = cfg["state_embedding_size"]
        in_dim += cfg["action_embedding_size"] if self.action_embed else 0
        in_dim += cfg["reward_embedding_size"] if self.reward_embed else 0

        self.pre_gru = None
        if cfg["encoder_layers_before_gru"]:
            widths = [in_dim] + list(cfg["encoder_layers_before_gru"])
            self.pre_gru = DenseNet(store, "enc/pre_gru", widths, rng,
                                    hidden_act="relu", out_act="relu", scheme="normal")
            in_dim = widths[-1]
        self.gru = GRUCell(store, "enc/gru", in_dim, cfg["encoder_gru_hidden_size"], rng)
        head_in = cfg["encoder_gru_hidden_size"]
        self.post_gru = None
        if cfg["encoder_layers_after_gru"]:
            widths = [head_in] + list(cfg["encoder_layers_after_gru"])
            self.post_gru = DenseNet(store, "enc/post_gru", widths, rng,
                                     hidden_act="relu", out_act="relu", scheme="normal")
            head_in = widths[-1]
        self.mu_head = Linear(store, "enc/mu", head_in, latent_dim, rng, "normal")
        self.logvar_head = Linear(store, "enc/logvar", head_in, latent_dim, rng, "normal")
        self.hidden_dim = cfg["encoder_gru_hidden_size"]

    def _token(self, obs, action, reward, params):
        parts = [self.state_embed(obs, params, act="relu")]
        if self.action_embed is not None:
            parts.append(self.action_embed(action, params, act="relu"))
        if self.reward_embed is not None:
            parts.append(self.reward_embed(reward, params, act="relu"))
        x = ad.concat(parts, axis=1) if len(parts) > 1 else parts[0]
        if self.pre_gru is not None:
            x = self.pre_gru(x, params)
        return x

    def _heads(self, h, params):
        z = self.post_gru(h, params) if self.post_gru is not None else h
        mu = self.mu_head(z, params)
        logvar = ad.clip(self.logvar_head(z, params), -LOGVAR_CLAMP, LOGVAR_CLAMP)
        return mu, logvar

    def step_raw(self, h, obs, action, reward, params=True):
        """One recurrent step; inputs may be Vars (update) or arrays (rollout)."""
        if not np.isfinite(ad.value(obs)).all() or not np.isfinite(ad.value(reward)).all():
            raise FloatingPointError("non-finite encoder input")
        x = self._token(obs, action, reward, params)
        h_new = self.gru.step(h, x, params)
        mu, logvar = self._heads(h_new, params)
        return h_new, mu, logvar

    def initial_raw(self, n, dtype=np.float64, params=False):
        """Belief before any transition: one step on an all-zero token."""
        h0 = np.zeros((n, self.hidden_dim), dtype=dtype)
        obs = np.zeros((n, self.obs_dim), dtype=dtype)
        act = np.zeros((n, self.action_dim), dtype=dtype)
        rew = np.zeros((n, 1), dtype=dtype)
        return self.step_raw(h0, obs, act, rew, params)

    # array-only conveniences used during rollouts
    def initial_belief(self, n, dtype=np.float64):
        h, mu, logvar = self.initial_raw(n, dtype, params=False)
        return LatentBelief(mu, logvar, h)

    def encode_step(self, belief, obs, action, reward):
        """Advance the belief by one observed transition (inference mode)."""
        h, mu, logvar = self.step_raw(
            belief.h, obs, action, np.asarray(reward).reshape(-1, 1), params=False)
        return LatentBelief(mu, logvar, h)
