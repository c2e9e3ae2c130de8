"""Central finite-difference verification of analytic gradients."""

import numpy as np

from .autodiff import backward


def gradcheck(store, loss_fn, rng, coords=100, step=1e-5, floor=1e-6):
    """Compare backward() gradients against central differences.

    loss_fn must rebuild the same scalar loss (Var) from the store's current
    parameter values on every call. Checks `coords` randomly chosen parameter
    coordinates and returns the worst relative error
    |fd - an| / max(|fd|, |an|, floor).
    """
    store.zero_grads()
    backward(loss_fn())
    flat = [(p, i) for p in store for i in range(p.data.size)]
    picks = rng.choice(len(flat), size=min(coords, len(flat)), replace=False)
    worst = 0.0
    for k in picks:
        p, i = flat[k]
        analytic = p.grad.flat[i]
        orig = p.data.flat[i]
        p.data.flat[i] = orig + step
        up = float(loss_fn().data)
        p.data.flat[i] = orig - step
        down = float(loss_fn().data)
        p.data.flat[i] = orig
        fd = (up - down) / (2.0 * step)
        err = abs(fd - analytic) / max(abs(fd), abs(analytic), floor)
        worst = max(worst, err)
    return worst
