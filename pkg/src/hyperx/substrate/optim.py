"""Adaptive moment optimizer over a ParamStore."""

import numpy as np


class Adam:
    """Bias-corrected first/second moment gradient descent (beta1=0.9,
    beta2=0.999). Mutates parameters in place from their accumulated grads.
    """

    def __init__(self, store, lr, eps=1e-8, beta1=0.9, beta2=0.999):
        self.store = store
        self.lr = lr
        self.eps = eps
        self.beta1, self.beta2 = beta1, beta2
        self.t = 0
        self.m = {p.path: np.zeros_like(p.data) for p in store}
        self.v = {p.path: np.zeros_like(p.data) for p in store}

    def step(self, lr=None, eps=None):
        lr = self.lr if lr is None else lr
        eps = self.eps if eps is None else eps
        self.t += 1
        b1, b2 = self.beta1, self.beta2
        bc1 = 1.0 - b1 ** self.t
        bc2 = 1.0 - b2 ** self.t
        for p in self.store:
            g = p.grad
            if not np.isfinite(g).all():
                raise FloatingPointError("non-finite gradient for %r" % p.path)
            m = self.m[p.path]
            v = self.v[p.path]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * np.square(g)
            p.data -= lr * (m / bc1) / (np.sqrt(v / bc2) + eps)

    def state(self):
        out = {"t": np.asarray(self.t)}
        for path in self.m:
            out["m/" + path] = self.m[path]
            out["v/" + path] = self.v[path]
        return out

    def load_state(self, state):
        self.t = int(state["t"])
        for path in self.m:
            self.m[path][...] = state["m/" + path]
            self.v[path][...] = state["v/" + path]
