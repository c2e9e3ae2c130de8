"""Action distributions in both graph mode (updates) and array mode (acting)."""

import numpy as np

from ..substrate import autodiff as ad

LOG_2PI = float(np.log(2.0 * np.pi))
LOG_STD_MIN, LOG_STD_MAX = -20.0, 2.0


# -- categorical --------------------------------------------------------------

def log_softmax(logits):
    return ad.sub(logits, ad.logsumexp(logits, axis=1))


def categorical_sample(logits, rng):
    z = logits - logits.max(axis=1, keepdims=True)
    p = np.exp(z)
    p /= p.sum(axis=1, keepdims=True)
    u = rng.random((len(p), 1))
    return (p.cumsum(axis=1) < u).sum(axis=1).astype(np.int64)


def categorical_logprob(logits, actions):
    lsm = log_softmax(logits)
    if ad.is_var(lsm):
        return ad.select_columns(lsm, actions)
    return lsm[np.arange(len(actions)), actions][:, None]


def categorical_entropy(logits):
    """Per-row entropy, in [0, log n_actions]."""
    lsm = log_softmax(logits)
    return ad.mul(ad.sum_(ad.mul(ad.exp(lsm), lsm), axis=1, keepdims=True), -1.0)


# -- diagonal gaussian ---------------------------------------------------------

def gaussian_sample(mean, log_std, rng):
    return mean + np.exp(log_std) * rng.standard_normal(mean.shape)


def gaussian_logprob(mean, log_std, actions):
    inv_var = ad.exp(ad.mul(log_std, -2.0))
    quad = ad.mul(ad.square(ad.sub(actions, mean)), inv_var)
    per_dim = ad.mul(ad.add(ad.add(quad, ad.mul(log_std, 2.0)), LOG_2PI), -0.5)
    return ad.sum_(per_dim, axis=1, keepdims=True)


def gaussian_entropy(log_std):
    """Closed form 0.5 * sum(1 + log 2pi + 2 log sigma); state-independent,
    so a single scalar covers the whole batch."""
    per_dim = ad.mul(ad.add(ad.mul(log_std, 2.0), 1.0 + LOG_2PI), 0.5)
    return ad.sum_(per_dim)
