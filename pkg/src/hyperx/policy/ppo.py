"""Clipped-ratio policy optimization over a filled rollout buffer."""

import numpy as np

from ..substrate import Adam
from ..substrate import autodiff as ad

MAX_GRAD_NORM = 0.5


class PPO:
    def __init__(self, net, cfg):
        self.net = net
        self.cfg = cfg
        self.optimizer = Adam(net.store, lr=cfg["lr_policy"], eps=cfg["policy_eps"])

    def update(self, buffer, advantages, returns, rng):
        """ppo_num_epochs passes of ppo_num_minibatch minibatches.

        Advantages are normalized per minibatch; belief inputs are plain
        arrays, so no gradient can reach the encoder. Returns mean loss
        diagnostics across minibatches.
        """
        cfg = self.cfg
        dt = self.net.store.dtype.type
        flat = buffer.flat()
        obs_all = flat["obs"].astype(dt, copy=False)
        bel_all = flat["beliefs"].astype(dt, copy=False)
        act_all = flat["actions"]
        if act_all.dtype != np.int64:
            act_all = act_all.astype(dt, copy=False)
        adv_flat = advantages.reshape(-1)
        ret_flat = returns.reshape(-1)
        n_total = len(ret_flat)
        mb_size = n_total // cfg["ppo_num_minibatch"]

        stats = {"ppo_loss": 0.0, "value_loss": 0.0, "entropy": 0.0}
        count = 0
        for _ in range(cfg["ppo_num_epochs"]):
            perm = rng.permutation(n_total)
            for k in range(cfg["ppo_num_minibatch"]):
                idx = perm[k * mb_size:(k + 1) * mb_size]
                adv = adv_flat[idx]
                adv = (adv - adv.mean()) / (adv.std() + 1e-8)

                log_prob, entropy, value = self.net.evaluate_actions(
                    obs_all[idx], bel_all[idx], act_all[idx])
                ratio = ad.exp(ad.sub(log_prob, flat["log_probs"][idx][:, None].astype(dt)))
                if not np.isfinite(ratio.data).all():
                    continue  # skip pathological minibatch, keep training
                adv_col = adv[:, None].astype(dt)
                surr = ad.minimum(
                    ad.mul(ratio, adv_col),
                    ad.mul(ad.clip(ratio, 1.0 - cfg["ppo_clip_param"],
                                   1.0 + cfg["ppo_clip_param"]), adv_col))
                pg_loss = ad.mul(ad.mean(surr), -1.0)

                ret_col = ret_flat[idx][:, None].astype(dt)
                old_v = flat["values"][idx][:, None].astype(dt)
                v_clip = ad.add(old_v, ad.clip(ad.sub(value, old_v),
                                               -cfg["ppo_clip_param"], cfg["ppo_clip_param"]))
                v_loss = ad.mul(ad.mean(ad.maximum(
                    ad.square(ad.sub(value, ret_col)),
                    ad.square(ad.sub(v_clip, ret_col)))), 0.5)

                loss = ad.add(
                    ad.add(pg_loss, ad.mul(v_loss, cfg["policy_value_loss_coef"])),
                    ad.mul(entropy, -cfg["policy_entropy_coef"]))

                self.net.store.zero_grads()
                ad.backward(loss)
                self.net.store.clip_grad_norm(MAX_GRAD_NORM)
                self.optimizer.step()

                stats["ppo_loss"] += float(pg_loss.data)
                stats["value_loss"] += float(v_loss.data)
                stats["entropy"] += float(entropy.data)
                count += 1
        if count:
            for k in stats:
                stats[k] /= count
        return stats
