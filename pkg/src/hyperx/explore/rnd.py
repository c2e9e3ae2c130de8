"""Hyper-state novelty via random network distillation.

A trainable predictor chases a frozen, randomly initialized prior network
over every hyper-state (state slice ++ belief) the agent has visited; the
squared prediction gap is the novelty bonus. With an ensemble of B pairs the
bonus is the Ciosek-style uncertainty max(0, mean_err + beta * var_err)
(aleatoric floor fixed at 0); B = 1 reduces exactly to the plain squared
error.
"""

import numpy as np

from ..substrate import Adam, DenseNet, ParamStore
from ..substrate import autodiff as ad
from ..normalize import RunningMeanStd


class RndPair:
    def __init__(self, in_dim, cfg, rng, dtype=np.float64, ensemble_size=1, beta=1.0):
        self.in_dim = in_dim
        self.B = ensemble_size
        self.beta = beta
        self.prior_store = ParamStore(dtype)
        self.store = ParamStore(dtype)  # predictors (the only trainable part)
        widths_g = [in_dim] + list(cfg["layers_rpf_prior"]) + [cfg["rpf_output_dim"]]
        widths_f = [in_dim] + list(cfg["layers_rpf_predictor"]) + [cfg["rpf_output_dim"]]
        pred_scheme = "orthogonal" if cfg["rpf_use_orthogonal_init"] else "normal"
        # The init scale makes the frozen prior a sharper random function of
        # its inputs. It multiplies the first layer only: scaling every layer
        # of a deep prior compounds to outputs the predictor could not reach
        # within any reasonable training budget.
        self.priors = [
            DenseNet(self.prior_store, "rnd/prior%d" % j, widths_g, rng,
                     hidden_act="relu", out_act="identity", scheme="normal")
            for j in range(self.B)
        ]
        for g in self.priors:
            g.layers[0].w.data *= cfg["rpf_init_weight_scale"]
        self.predictors = [
            DenseNet(self.store, "rnd/pred%d" % j, widths_f, rng,
                     hidden_act="relu", out_act="identity", scheme=pred_scheme)
            for j in range(self.B)
        ]
        self.optimizer = Adam(self.store, lr=cfg["lr_rpf"])
        self.input_norm = RunningMeanStd(in_dim) if cfg["rpf_norm_inputs"] else None

    def _prep(self, x, update_norm=False):
        x = np.asarray(x)
        if self.input_norm is not None:
            x = self.input_norm.normalize(x, update=update_norm)
        return x

    def bonus(self, x, update_norm=False):
        """Per-row novelty of hyper-states x (n, in_dim); non-negative."""
        x = self._prep(x, update_norm)
        errs = np.stack([
            np.square(f(x, params=False) - g(x, params=False)).sum(axis=1)
            for f, g in zip(self.predictors, self.priors)
        ])
        mean_err = errs.mean(axis=0)
        if self.B == 1:
            return mean_err
        var_err = errs.var(axis=0, ddof=1)
        return np.maximum(0.0, mean_err + self.beta * var_err)

    def update(self, batch):
        """One distillation step minimizing the mean squared prediction
        error over a batch of visited hyper-states. Returns the loss."""
        x = self._prep(batch)
        losses = []
        for f, g in zip(self.predictors, self.priors):
            target = g(x, params=False)
            err = ad.sub(f(ad.Var(x)), target)
            losses.append(ad.mean(ad.sum_(ad.square(err), axis=1)))
        loss = losses[0]
        for extra in losses[1:]:
            loss = ad.add(loss, extra)
        self.store.zero_grads()
        ad.backward(loss)
        self.optimizer.step()
        return float(loss.data)


class HyperStateBuffer:
    """Append-only ring of visited hyper-states."""

    def __init__(self, capacity, dim, dtype=np.float64):
        self.data = np.zeros((int(capacity), dim), dtype=dtype)
        self.count = 0
        self.ptr = 0

    def __len__(self):
        return min(self.count, len(self.data))

    def add(self, rows):
        for row in np.atleast_2d(rows):
            self.data[self.ptr] = row
            self.ptr = (self.ptr + 1) % len(self.data)
            self.count += 1

    def sample(self, rng, batch_size):
        idx = rng.integers(0, len(self), size=batch_size)
        return self.data[idx]

    def state(self):
        return {"data": self.data[:len(self)], "count": np.asarray(self.count),
                "ptr": np.asarray(self.ptr)}

    def load_state(self, state):
        n = int(np.asarray(state["count"]).item())
        k = min(n, len(self.data))
        self.data[:k] = state["data"]
        self.count = n
        self.ptr = int(np.asarray(state["ptr"]).item())


def hyper_bonus(pair: RndPair, hyper_states):
    """Novelty bonus for assembled hyper-state rows."""
    return pair.bonus(hyper_states)


def rnd_update(pair: RndPair, buffer: HyperStateBuffer, rng, batch_size):
    """One predictor step on a uniform sample of visited hyper-states;
    skipped (returns None) while the buffer is empty."""
    if len(buffer) == 0:
        return None
    return pair.update(buffer.sample(rng, batch_size))
