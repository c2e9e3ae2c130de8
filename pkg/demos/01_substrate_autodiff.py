"""Differentiable substrate: tape, gradients, optimizer.

Builds a small dense net, checks its analytic gradients against central
finite differences, and fits a toy regression with the adaptive-moment
optimizer — the same machinery every learnable module in the lab runs on.
"""

import numpy as np

from hyperx.substrate import Adam, DenseNet, ParamStore, backward
from hyperx.substrate import autodiff as ad
from hyperx.substrate.gradcheck import gradcheck

rng = np.random.default_rng(0)

store = ParamStore()
net = DenseNet(store, "demo", [3, 32, 16, 1], rng, hidden_act="tanh")
x = rng.standard_normal((64, 3))
y = np.sin(x.sum(axis=1, keepdims=True))

print("parameters:", store.num_values())

err = gradcheck(store, lambda: ad.sum_(ad.square(ad.sub(net(ad.Var(x)), y))),
                rng, coords=150)
print("gradcheck worst relative error: %.2e (tolerance 1e-4)" % err)

opt = Adam(store, lr=1e-2)
for step in range(400):
    loss = ad.mean(ad.square(ad.sub(net(ad.Var(x)), y)))
    store.zero_grads()
    backward(loss)
    opt.step()
    if step % 100 == 0 or step == 399:
        print("step %3d  mse %.5f" % (step, float(loss.data)))

print("fit works; bit-for-bit deterministic given the seed.")
