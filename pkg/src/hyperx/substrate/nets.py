"""Dense networks and a gated recurrent cell built on the autodiff ops.

Every layer's forward works both on Vars (training, graph recorded) and on
plain ndarrays (rollout inference). Parameters live in a ParamStore passed
at construction time; nets only keep references.
"""

import numpy as np

from . import autodiff as ad

ACTIVATIONS = {
    "tanh": ad.tanh,
    "relu": ad.relu,
    "identity": lambda x: x,
}


def init_weights(rng, fan_in, fan_out, scheme, gain=1.0, dtype=np.float64):
    """Weight init. Schemes:

    - normc: Gaussian, each output column rescaled to unit L2 norm, times gain.
    - orthogonal: QR-orthogonalized Gaussian, times gain.
    - normal: Gaussian with std gain/sqrt(fan_in) (pass gain > 1 to scale up
      a fixed random net, e.g. a distillation prior).
    """
    w = rng.standard_normal((fan_in, fan_out))
    if scheme == "normc":
        w *= gain / np.sqrt(np.square(w).sum(axis=0, keepdims=True))
    elif scheme == "orthogonal":
        q, r = np.linalg.qr(rng.standard_normal((max(fan_in, fan_out), min(fan_in, fan_out))))
        q *= np.sign(np.diag(r))  # make decomposition unique
        if fan_in < fan_out:
            q = q.T
        w = gain * q[:fan_in, :fan_out]
    elif scheme == "normal":
        w *= gain / np.sqrt(fan_in)
    else:
        raise ValueError("unknown init scheme %r" % scheme)
    return w.astype(dtype)


class Linear:
    def __init__(self, store, path, fan_in, fan_out, rng, scheme="normc", gain=1.0):
        self.w = store.register(path + "/w", init_weights(rng, fan_in, fan_out, scheme, gain, store.dtype))
        self.b = store.register(path + "/b", np.zeros(fan_out, dtype=store.dtype))
        self.fan_in, self.fan_out = fan_in, fan_out

    def __call__(self, x, params=True, act="identity"):
        w, b = (self.w, self.b) if params else (self.w.data, self.b.data)
        return ad.linear(x, w, b, act)


class DenseNet:
    """Feed-forward stack: widths[0] -> ... -> widths[-1].

    The hidden activation applies after every layer but the last; the output
    activation (identity | tanh) after the last. Stateless between calls.
    """

    def __init__(self, store, path, widths, rng, hidden_act="tanh",
                 out_act="identity", scheme="normc", gain=1.0, out_gain=None):
        if len(widths) < 2:
            raise ValueError("DenseNet needs at least input and output widths")
        self.widths = list(widths)
        self.hidden_act = hidden_act
        self.out_act = out_act
        self.layers = []
        for i, (a, b) in enumerate(zip(widths[:-1], widths[1:])):
            last = i == len(widths) - 2
            g = out_gain if (last and out_gain is not None) else gain
            self.layers.append(Linear(store, "%s/%d" % (path, i), a, b, rng, scheme, g))

    @property
    def in_dim(self):
        return self.widths[0]

    @property
    def out_dim(self):
        return self.widths[-1]

    def __call__(self, x, params=True):
        xv = ad.value(x)
        if xv.ndim != 2 or xv.shape[1] != self.in_dim:
            raise ValueError(
                "bad input shape %r for net with input width %d" % (xv.shape, self.in_dim)
            )
        if not np.isfinite(xv).all():
            raise FloatingPointError("non-finite input to dense net")
        h = x
        for layer in self.layers[:-1]:
            h = layer(h, params, act=self.hidden_act)
        return self.layers[-1](h, params, act=self.out_act)


def forward_dense(net, batch):
    """Inference-mode forward pass on a plain array batch."""
    return net(np.asarray(batch), params=False)


class GRUCell:
    """Single gated recurrent unit with fused gate weights.

    step(h, x) is deterministic given parameters and preserves the hidden
    width. Gate order in the fused matrices is (reset, update, candidate).
    """

    def __init__(self, store, path, in_dim, hidden_dim, rng, scheme="normal"):
        self.in_dim, self.hidden_dim = in_dim, hidden_dim
        d = store.dtype
        self.w_ih = store.register(
            path + "/w_ih", init_weights(rng, in_dim, 3 * hidden_dim, scheme, 1.0, d))
        self.w_hh = store.register(
            path + "/w_hh", init_weights(rng, hidden_dim, 3 * hidden_dim, scheme, 1.0, d))
        self.b_ih = store.register(path + "/b_ih", np.zeros(3 * hidden_dim, dtype=d))
        self.b_hh = store.register(path + "/b_hh", np.zeros(3 * hidden_dim, dtype=d))

    def step(self, h, x, params=True):
        H = self.hidden_dim
        if params:
            gi = ad.linear(x, self.w_ih, self.b_ih)
            gh = ad.linear(h, self.w_hh, self.b_hh)
        else:
            gi = ad.linear(x, self.w_ih.data, self.b_ih.data)
            gh = ad.linear(h, self.w_hh.data, self.b_hh.data)
        r = ad.sigmoid(ad.add(ad.cols(gi, 0, H), ad.cols(gh, 0, H)))
        z = ad.sigmoid(ad.add(ad.cols(gi, H, 2 * H), ad.cols(gh, H, 2 * H)))
        n = ad.tanh(ad.add(ad.cols(gi, 2 * H, 3 * H), ad.mul(r, ad.cols(gh, 2 * H, 3 * H))))
        return ad.add(ad.mul(ad.sub(1.0, z), n), ad.mul(z, h))
