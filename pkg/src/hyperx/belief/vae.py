"""Trajectory VAE: encoder + decoders + the per-timestep ELBO objective.

For a trajectory tau with T transitions the objective sums, over every
belief index t in 0..T, the reconstruction log-likelihood of the FULL
trajectory under one latent sample from q(m | tau_:t), minus the KL from
q(m | tau_:t) to q(m | tau_:t-1) (to the standard normal prior at t = 0).
"""

import numpy as np

from ..substrate import Adam, ParamStore
from ..substrate import autodiff as ad
from ..normalize import RunningMeanStd
from .buffer import VaeBuffer
from .decoders import TransitionDecoder, gaussian_nll
from .encoder import BeliefEncoder

LOG_2PI = float(np.log(2.0 * np.pi))


class BeliefVae:
    def __init__(self, obs_dim, action_dim, cfg, rng, dtype=np.float64):
        self.cfg = cfg
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.latent_dim = cfg["latent_dim"]
        self.store = ParamStore(dtype)
        self.encoder = BeliefEncoder(self.store, obs_dim, action_dim, self.latent_dim, cfg, rng)

        self.reward_decoder = None
        if cfg["decode_reward"]:
            cond = obs_dim  # always conditions on the post-transition state
            if cfg["input_prev_state"]:
                cond += obs_dim
            if cfg["input_action"]:
                cond += action_dim
            self.reward_decoder = TransitionDecoder(
                self.store, "dec/reward", self.latent_dim, cond,
                cfg["reward_decoder_layers"], 1, rng)
        self.state_decoder = None
        if cfg["decode_state"]:
            self.state_decoder = TransitionDecoder(
                self.store, "dec/state", self.latent_dim, obs_dim + action_dim,
                cfg["state_decoder_layers"], obs_dim, rng)

        self.optimizer = Adam(self.store, lr=cfg["lr_vae"])
        self.rew_norm = RunningMeanStd(1) if cfg["normalise_rew_targets"] else None

    # ------------------------------------------------------------------
    # target handling

    def observe_rewards(self, rewards):
        """Track reward statistics for target normalization."""
        if self.rew_norm is not None:
            self.rew_norm.update(np.asarray(rewards).reshape(-1, 1))

    def reward_targets(self, rewards):
        r = np.asarray(rewards)
        dtype = r.dtype
        if self.rew_norm is not None:
            r = (r - self.rew_norm.mean) / self.rew_norm.std
        if self.cfg["vae_squash_targets"]:
            r = np.tanh(r)
        return r.astype(dtype, copy=False)

    # ------------------------------------------------------------------
    # ELBO

    def _reward_cond(self, prev_obs, actions, next_obs):
        parts = [next_obs]
        if self.cfg["input_prev_state"]:
            parts.append(prev_obs)
        if self.cfg["input_action"]:
            parts.append(actions)
        return np.concatenate(parts, axis=1)

    def encode_batch(self, prev_obs, actions, rewards, next_obs, params=True):
        """Unroll the encoder over a (B, T, .) batch; returns per-timestep
        mu / logvar lists of length T + 1 (index 0 = learned prior)."""
        B, T = prev_obs.shape[0], prev_obs.shape[1]
        tbptt = self.cfg["tbptt_stepsize"]
        h, mu, logvar = self.encoder.initial_raw(B, self.store.dtype.type, params=params)
        mus, logvars = [mu], [logvar]
        for i in range(T):
            if params and tbptt and i > 0 and i % tbptt == 0:
                h = ad.value(h)  # truncate backprop-through-time
            h, mu, logvar = self.encoder.step_raw(
                h, next_obs[:, i], actions[:, i], rewards[:, i], params=params)
            mus.append(mu)
            logvars.append(logvar)
        return mus, logvars

    def elbo_terms(self, prev_obs, actions, rewards, next_obs, rng, params=True):
        """Reconstruction and KL pieces for a trajectory batch.

        Returns (rew_nll, state_nll, kl), each a scalar Var aggregated per
        the vae_avg_* flags (means over subsampled index sets are rescaled
        so sum-mode stays an unbiased estimate of the full double sum).
        """
        B, T = prev_obs.shape[0], prev_obs.shape[1]
        cfg = self.cfg
        mus, logvars = self.encode_batch(prev_obs, actions, rewards, next_obs, params=params)

        # which belief indices contribute an ELBO term
        n_elbos = T + 1
        if cfg["vae_subsample_elbos"] and cfg["vae_subsample_elbos"] < n_elbos:
            t_idx = np.sort(rng.choice(n_elbos, size=cfg["vae_subsample_elbos"], replace=False))
        else:
            t_idx = np.arange(n_elbos)
        # which transitions each ELBO term reconstructs
        if cfg["vae_subsample_decodes"] and cfg["vae_subsample_decodes"] < T:
            i_idx = np.sort(rng.choice(T, size=cfg["vae_subsample_decodes"], replace=False))
        else:
            i_idx = np.arange(T)
        nt, ni = len(t_idx), len(i_idx)

        # one latent sample per (t, trajectory)
        eps = rng.standard_normal((nt, B, self.latent_dim)).astype(self.store.dtype.type)
        samples = []
        for k, t in enumerate(t_idx):
            std = ad.exp(ad.mul(logvars[t], 0.5))
            samples.append(ad.add(mus[t], ad.mul(std, eps[k])))
        latents = ad.vstack(samples)  # (nt*B, L), t-major

        # transition conditioning/targets, trajectory-major to match tiling
        po = prev_obs[:, i_idx].reshape(B * ni, -1)
        ac = actions[:, i_idx].reshape(B * ni, -1)
        no = next_obs[:, i_idx].reshape(B * ni, -1)
        rw = self.reward_targets(rewards)[:, i_idx].reshape(B * ni, 1)

        scale_t = 1.0 / nt if cfg["vae_avg_elbo_terms"] else (T + 1) / nt
        scale_i = 1.0 / ni if cfg["vae_avg_reconstruction_terms"] else T / ni
        scale = scale_t * scale_i / B

        rew_nll = state_nll = None
        if self.reward_decoder is not None:
            pred = self.reward_decoder.predict_pairs(
                latents, ni, self._reward_cond(po, ac, no), nt, params=params)
            rew_nll = ad.mul(ad.sum_(gaussian_nll(pred, np.tile(rw, (nt, 1)))), scale)
        if self.state_decoder is not None:
            pred = self.state_decoder.predict_pairs(
                latents, ni, np.concatenate([po, ac], axis=1), nt, params=params)
            state_nll = ad.mul(ad.sum_(gaussian_nll(pred, np.tile(no, (nt, 1)))), scale)

        # KL(q_t || q_{t-1}) at each sampled t (standard normal prior at t=0)
        kl_parts = []
        for t in t_idx:
            mu_t, lv_t = mus[t], logvars[t]
            if t == 0:
                term = ad.mul(ad.sum_(
                    ad.sub(ad.add(ad.exp(lv_t), ad.square(mu_t)), ad.add(1.0, lv_t))), 0.5)
            else:
                mu_p, lv_p = mus[t - 1], logvars[t - 1]
                ratio = ad.exp(ad.sub(lv_t, lv_p))
                diff = ad.div(ad.square(ad.sub(mu_t, mu_p)), ad.exp(lv_p))
                term = ad.mul(ad.sum_(
                    ad.sub(ad.add(ratio, diff), ad.add(1.0, ad.sub(lv_t, lv_p)))), 0.5)
            kl_parts.append(term)
        kl_scale = (1.0 / nt if cfg["vae_avg_elbo_terms"] else (T + 1) / nt) / B
        kl = ad.mul(_sum_scalars(kl_parts), kl_scale)
        return rew_nll, state_nll, kl

    def loss(self, prev_obs, actions, rewards, next_obs, rng, params=True):
        rew_nll, state_nll, kl = self.elbo_terms(
            prev_obs, actions, rewards, next_obs, rng, params=params)
        cfg = self.cfg
        total = ad.mul(kl, cfg["kl_weight"])
        if rew_nll is not None:
            total = ad.add(total, ad.mul(rew_nll, cfg["rew_loss_coeff"]))
        if state_nll is not None:
            total = ad.add(total, ad.mul(state_nll, cfg["state_loss_coeff"]))
        return total, rew_nll, state_nll, kl

    def update(self, buffer: VaeBuffer, rng, num_updates=None):
        """Gradient steps on sampled trajectory batches. Returns mean
        (recon, kl) across the updates, or None when the buffer is empty."""
        if len(buffer) == 0:
            return None
        num_updates = num_updates if num_updates is not None else self.cfg["num_vae_updates"]
        recon_v, kl_v = 0.0, 0.0
        for _ in range(num_updates):
            batch = buffer.sample(rng, self.cfg["vae_batch_num_trajs"])
            total, rew_nll, state_nll, kl = self.loss(*batch, rng)
            self.store.zero_grads()
            ad.backward(total)
            if self.cfg["vae_max_grad_norm"]:
                self.store.clip_grad_norm(self.cfg["vae_max_grad_norm"])
            self.optimizer.step()
            recon_v += sum(float(x.data) for x in (rew_nll, state_nll) if x is not None)
            kl_v += float(kl.data)
        return recon_v / num_updates, kl_v / num_updates

    # ------------------------------------------------------------------
    # reconstruction-error bonus (inference mode, called during rollouts)

    def reconstruction_error(self, mu, logvar, prev_obs, actions, rewards, next_obs, rng):
        """Negative log-likelihood of the observed transition under one
        latent sample from the current belief; the exploration signal for
        states where belief inference is still wrong."""
        eps = rng.standard_normal(mu.shape)
        m = mu + np.exp(0.5 * logvar) * eps
        bonus = np.zeros(len(mu))
        if self.reward_decoder is not None:
            cond = self._reward_cond(prev_obs, actions, next_obs)
            pred = self.reward_decoder.predict(m, cond, params=False)
            target = self.reward_targets(rewards.reshape(-1, 1))
            bonus += (0.5 * np.square(pred - target) + 0.5 * LOG_2PI).sum(axis=1)
        if self.state_decoder is not None:
            pred = self.state_decoder.predict(m, np.concatenate([prev_obs, actions], axis=1),
                                              params=False)
            bonus += (0.5 * np.square(pred - next_obs) + 0.5 * LOG_2PI).sum(axis=1)
        return bonus


def _sum_scalars(parts):
    total = parts[0]
    for p in parts[1:]:
        total = ad.add(total, p)
    return total
