"""Running statistics for observation, latent, and reward streams."""

import numpy as np


class RunningMeanStd:
    """Welford-style running mean/variance over batches of rows."""

    def __init__(self, dim, epsilon=1e-4, clip=10.0):
        self.mean = np.zeros(dim)
        self.var = np.ones(dim)
        self.count = epsilon
        self.clip = clip

    @property
    def std(self):
        return np.sqrt(self.var + 1e-8)

    def update(self, batch):
        batch = np.asarray(batch, dtype=np.float64)
        b_mean = batch.mean(axis=0)
        b_var = batch.var(axis=0)
        b_count = batch.shape[0]
        delta = b_mean - self.mean
        tot = self.count + b_count
        self.mean = self.mean + delta * b_count / tot
        m_a = self.var * self.count
        m_b = b_var * b_count
        self.var = (m_a + m_b + np.square(delta) * self.count * b_count / tot) / tot
        self.count = tot

    def normalize(self, x, update=False):
        if update:
            self.update(x)
        return np.clip((x - self.mean) / self.std, -self.clip, self.clip)

    def state(self):
        return {"mean": self.mean, "var": self.var, "count": np.asarray(self.count)}

    def load_state(self, state):
        self.mean = np.asarray(state["mean"], dtype=np.float64).copy()
        self.var = np.asarray(state["var"], dtype=np.float64).copy()
        self.count = float(np.asarray(state["count"]).item())


class RollingStd:
    """Exponential-moving estimate of a scalar stream's standard deviation
    (second moment about zero; rewards are scaled, not centered)."""

    def __init__(self, decay=0.999):
        self.decay = decay
        self.sq = 1.0

    def update(self, values):
        values = np.asarray(values, dtype=np.float64)
        if values.size:
            self.sq = self.decay * self.sq + (1.0 - self.decay) * float(np.mean(np.square(values)))

    @property
    def std(self):
        return max(np.sqrt(self.sq), 1e-8)

    def normalize(self, values):
        return values / self.std

    def state(self):
        return {"sq": np.asarray(self.sq)}

    def load_state(self, state):
        self.sq = float(np.asarray(state["sq"]).item())
