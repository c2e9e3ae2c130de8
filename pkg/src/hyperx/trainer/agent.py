"""Agent assembly: policy + belief machinery + novelty networks, built from
one config. Handles the learned/oracle belief split so the training loop and
evaluator can stay mode-agnostic.
"""

import numpy as np

from .. import oracle
from ..belief.vae import BeliefVae
from ..explore.rnd import RndPair
from ..policy.nets import PolicyNet
from ..normalize import RunningMeanStd


class Agent:
    def __init__(self, cfg, spec, rng):
        self.cfg = cfg
        self.spec = spec
        self.dtype = np.float64 if cfg["precision"] == "float64" else np.float32

        self.action_enc_dim = spec.n_actions if spec.discrete else spec.action_dim
        self.oracle_mode = cfg["belief_mode"] == "oracle"
        if self.oracle_mode:
            self.vae = None
            self.belief_dim = 2
        else:
            self.vae = BeliefVae(spec.obs_dim, self.action_enc_dim, cfg, rng, self.dtype)
            self.belief_dim = 2 * cfg["latent_dim"]

        self.policy = PolicyNet(spec.obs_dim, self.belief_dim, cfg, rng,
                                n_actions=spec.n_actions,
                                action_dim=spec.action_dim, dtype=self.dtype)

        self.state_idx = cfg["state_expl_idx"] or list(range(spec.obs_dim))
        rnd_dim = len(self.state_idx)
        if cfg["rpf_input_mode"] == "hyperstate":
            rnd_dim += self.belief_dim
        self.rnd = RndPair(rnd_dim, cfg, rng, self.dtype,
                           ensemble_size=cfg["rnd_ensemble_size"],
                           beta=cfg["rnd_ensemble_beta"])
        self.rnd_dim = rnd_dim

        self.obs_norm = RunningMeanStd(spec.obs_dim) if cfg["norm_state_for_policy"] else None
        self.latent_norm = RunningMeanStd(self.belief_dim) if cfg["norm_latent_for_policy"] else None

    # -- belief handling -----------------------------------------------------

    def initial_belief(self, n):
        if self.oracle_mode:
            return oracle.prior_belief(n)
        return self.vae.encoder.initial_belief(n, self.dtype)

    def reset_belief_rows(self, belief, mask):
        fresh = self.initial_belief(int(mask.sum()))
        if self.oracle_mode:
            belief[mask] = fresh
        else:
            belief.mu[mask] = fresh.mu[: mask.sum()]
            belief.logvar[mask] = fresh.logvar[: mask.sum()]
            belief.h[mask] = fresh.h[: mask.sum()]
        return belief

    def encode(self, belief, trans_next_obs, env_action, reward, native_action=None,
               next_state=None):
        """Advance beliefs by one observed transition."""
        if self.oracle_mode:
            return oracle.oracle_update(
                belief, x=next_state[:, 0], reward=reward,
                velocity=next_state[:, 1], action=native_action[:, 0])
        return self.vae.encoder.encode_step(
            belief, trans_next_obs.astype(self.dtype),
            env_action.astype(self.dtype), reward.astype(self.dtype))

    def belief_vec(self, belief):
        if self.oracle_mode:
            return belief
        return belief.policy_vec()

    def encode_action(self, stored_action, env_action):
        """Encoder-ready action: one-hot for discrete, native otherwise."""
        if self.spec.discrete:
            onehot = np.zeros((len(stored_action), self.spec.n_actions), dtype=self.dtype)
            onehot[np.arange(len(stored_action)), stored_action] = 1.0
            return onehot
        return env_action * self.spec.action_bound

    # -- policy inputs ---------------------------------------------------------

    def policy_inputs(self, obs, bvec, update_stats=False):
        o = obs
        if self.obs_norm is not None:
            o = self.obs_norm.normalize(obs, update=update_stats)
        b = bvec
        if self.latent_norm is not None:
            b = self.latent_norm.normalize(bvec, update=update_stats)
        return o.astype(self.dtype, copy=False), b.astype(self.dtype, copy=False)

    # -- exploration inputs ------------------------------------------------------

    def hyper_inputs(self, trans_next_obs, bvec_next):
        parts = [trans_next_obs[:, self.state_idx]]
        if self.cfg["rpf_input_mode"] == "hyperstate":
            parts.append(bvec_next)
        return np.concatenate(parts, axis=1).astype(self.dtype, copy=False)

    # -- persistence ---------------------------------------------------------------

    def stores(self):
        out = {"policy": self.policy.store, "rnd_pred": self.rnd.store,
               "rnd_prior": self.rnd.prior_store}
        if self.vae is not None:
            out["vae"] = self.vae.store
        return out

    def normalizer_state(self):
        out = {}
        if self.obs_norm is not None:
            for k, v in self.obs_norm.state().items():
                out["obs_norm/" + k] = v
        if self.latent_norm is not None:
            for k, v in self.latent_norm.state().items():
                out["latent_norm/" + k] = v
        if self.vae is not None and self.vae.rew_norm is not None:
            for k, v in self.vae.rew_norm.state().items():
                out["rew_targets/" + k] = v
        if self.rnd.input_norm is not None:
            for k, v in self.rnd.input_norm.state().items():
                out["rnd_inputs/" + k] = v
        return out

    def load_normalizer_state(self, extra):
        def sub(prefix):
            return {k[len(prefix):]: v for k, v in extra.items() if k.startswith(prefix)}

        if self.obs_norm is not None:
            self.obs_norm.load_state(sub("obs_norm/"))
        if self.latent_norm is not None:
            self.latent_norm.load_state(sub("latent_norm/"))
        if self.vae is not None and self.vae.rew_norm is not None:
            self.vae.rew_norm.load_state(sub("rew_targets/"))
        if self.rnd.input_norm is not None:
            self.rnd.input_norm.load_state(sub("rnd_inputs/"))

    def load_params(self, params):
        for name, store in self.stores().items():
            store.load_values(params[name])
