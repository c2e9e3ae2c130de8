"""Reward / next-state decoders with unit-variance Gaussian likelihoods."""

import numpy as np

from ..substrate import DenseNet
from ..substrate import autodiff as ad

LOG_2PI = float(np.log(2.0 * np.pi))


def gaussian_nll(pred, target):
    """Elementwise -log N(target | pred, 1)."""
    return ad.add(ad.mul(ad.square(ad.sub(pred, target)), 0.5), 0.5 * LOG_2PI)


class TransitionDecoder:
    """MLP over (latent ++ conditioning features) predicting a target vector.

    The first layer is kept splittable so batched (latent_t, transition_i)
    pairs can share work: each latent row is used against every transition
    row of its trajectory, so the two halves of the first matmul are
    computed once each and combined by a fused repeat/tile add.
    """

    def __init__(self, store, path, latent_dim, cond_dim, hidden, out_dim, rng):
        self.latent_dim = latent_dim
        self.cond_dim = cond_dim
        self.net = DenseNet(store, path, [latent_dim + cond_dim] + list(hidden) + [out_dim],
                            rng, hidden_act="relu", out_act="identity", scheme="normal")

    def predict(self, latent, cond, params=True):
        return self.net(ad.concat([latent, cond], axis=1), params)

    def predict_pairs(self, latents, rep, conds, tile, params=True):
        """Forward where `latents` rows repeat `rep` times and the whole
        `conds` block tiles `tile` times (row counts must match)."""
        net = self.net
        first = net.layers[0]
        w = first.w if params else first.w.data
        b = first.b if params else first.b.data
        lat_part = ad.matmul(latents, ad.rows(w, 0, self.latent_dim))
        cond_part = ad.matmul(conds, ad.rows(w, self.latent_dim, self.latent_dim + self.cond_dim))
        act = net.hidden_act if len(net.layers) > 1 else net.out_act
        h = ad.pair_bias_act(lat_part, cond_part, rep, tile, b, act=act)
        if len(net.layers) == 1:
            return h
        for layer in net.layers[1:-1]:
            h = layer(h, params, act=net.hidden_act)
        return net.layers[-1](h, params, act=net.out_act)
