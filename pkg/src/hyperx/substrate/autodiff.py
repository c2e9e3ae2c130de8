"""Reverse-mode automatic differentiation on numpy arrays.

Define-by-run: every operation on a Var records its parents and a backward
closure; `backward(loss)` walks the graph once in reverse topological order
and accumulates d(loss)/d(leaf) into each leaf's `.grad` buffer.

Ops dispatch on argument type, so the same layer code runs in two modes:
called with Vars it builds a graph, called with plain ndarrays it is just
numpy (the fast inference path used during rollout collection).

Backward closures hand gradients to `Var.add_grad(g, own=...)`: `own=True`
promises the array is freshly allocated and never reused by the caller, so
the first consumer can adopt it without a copy. Everything here is
single-threaded by design.
"""

import numpy as np


class Var:
    """A node in the computation graph wrapping an ndarray."""

    __slots__ = ("data", "grad", "parents", "bwd", "_owned")

    def __init__(self, data, parents=(), bwd=None):
        self.data = data
        self.grad = None
        self.parents = parents
        self.bwd = bwd
        self._owned = False

    @property
    def shape(self):
        return self.data.shape

    def add_grad(self, g, own=False):
        # first consumer adopts the buffer; a second consumer forces an
        # out-of-place add unless the buffer is exclusively ours, so shared
        # (non-owned) arrays are never mutated
        if self.grad is None:
            self.grad = g
            self._owned = own
        elif self._owned:
            self.grad += g
        else:
            self.grad = self.grad + g
            self._owned = True

    # operator sugar
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return mul(self, -1.0)


def is_var(x):
    return isinstance(x, Var)


def value(x):
    return x.data if isinstance(x, Var) else x


def _reduce_to(grad, shape):
    """Sum `grad` down to `shape` (inverse of numpy broadcasting).
    Returns (array, owned)."""
    gshape = grad.shape
    if gshape == shape:
        return grad, False
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape), True


def backward(loss):
    """Accumulate gradients of a scalar loss into every reachable leaf."""
    if not isinstance(loss, Var):
        raise ValueError("backward() needs a Var, got %r" % type(loss))
    if loss.data.size != 1:
        raise ValueError("backward() needs a scalar loss, got shape %r" % (loss.data.shape,))
    if not np.isfinite(loss.data).all():
        raise FloatingPointError("backward() on non-finite loss")

    # iterative postorder DFS. Nodes are marked seen when POPPED, not when
    # pushed: marking at push time can emit a shared parent before all of
    # its consumers have delivered their gradient contributions.
    order = []
    seen = set()
    stack = [(loss, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for p in node.parents:
            if p.bwd is not None and id(p) not in seen:
                stack.append((p, False))

    loss.add_grad(np.ones_like(loss.data), own=True)
    for node in reversed(order):
        if node.bwd is not None and node.grad is not None:
            node.bwd(node.grad)
    # free the graph so params only keep their accumulators
    for node in order:
        if node.bwd is not None:
            node.grad = None
            node.parents = ()
            node.bwd = None


# ---------------------------------------------------------------------------
# primitives. Each op returns a plain ndarray unless some input is a Var.


def _send(parent, g, own):
    red, fresh = _reduce_to(g, parent.data.shape)
    parent.add_grad(red, own=own or fresh)


def add(a, b):
    av, bv = value(a), value(b)
    out_data = av + bv
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            _send(a, g, own=False)
        if b_var:
            _send(b, g, own=False)

    out.bwd = bwd
    return out


def sub(a, b):
    av, bv = value(a), value(b)
    out_data = av - bv
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            _send(a, g, own=False)
        if b_var:
            _send(b, -g, own=True)

    out.bwd = bwd
    return out


def mul(a, b):
    av, bv = value(a), value(b)
    out_data = av * bv
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            _send(a, g * bv, own=True)
        if b_var:
            _send(b, g * av, own=True)

    out.bwd = bwd
    return out


def div(a, b):
    av, bv = value(a), value(b)
    out_data = av / bv
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            _send(a, g / bv, own=True)
        if b_var:
            _send(b, -g * av / (bv * bv), own=True)

    out.bwd = bwd
    return out


def matmul(a, b):
    av, bv = value(a), value(b)
    out_data = av @ bv
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            a.add_grad(g @ bv.T, own=True)
        if b_var:
            b.add_grad(av.T @ g, own=True)

    out.bwd = bwd
    return out


def _unary(a, out_data, grad_fn):
    out = Var(out_data, (a,))
    out.bwd = lambda g: a.add_grad(grad_fn(g), own=True)
    return out


def exp(a):
    av = value(a)
    y = np.exp(av)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * y)


def log(a):
    av = value(a)
    if not is_var(a):
        return np.log(av)
    return _unary(a, np.log(av), lambda g: g / av)


def tanh(a):
    av = value(a)
    y = np.tanh(av)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * (1.0 - y * y))


def sigmoid(a):
    av = value(a)
    y = np.empty_like(av)
    pos = av >= 0
    y[pos] = 1.0 / (1.0 + np.exp(-av[pos]))
    ex = np.exp(av[~pos])
    y[~pos] = ex / (1.0 + ex)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * y * (1.0 - y))


def relu(a):
    av = value(a)
    y = np.maximum(av, 0.0)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * (av > 0))


def square(a):
    av = value(a)
    if not is_var(a):
        return np.square(av)
    return _unary(a, np.square(av), lambda g: g * (2.0 * av))


def sqrt(a):
    av = value(a)
    y = np.sqrt(av)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * (0.5 / y))


def clip(a, lo, hi):
    """Clamp with pass-through gradient inside [lo, hi], zero outside."""
    av = value(a)
    y = np.clip(av, lo, hi)
    if not is_var(a):
        return y
    return _unary(a, y, lambda g: g * ((av >= lo) & (av <= hi)))


def minimum(a, b):
    av, bv = value(a), value(b)
    out_data = np.minimum(av, bv)
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):  # ties route the gradient to `a`
        if a_var:
            _send(a, g * (av <= bv), own=True)
        if b_var:
            _send(b, g * (av > bv), own=True)

    out.bwd = bwd
    return out


def maximum(a, b):
    av, bv = value(a), value(b)
    out_data = np.maximum(av, bv)
    a_var, b_var = is_var(a), is_var(b)
    if not (a_var or b_var):
        return out_data
    out = Var(out_data, tuple(x for x in (a, b) if is_var(x)))

    def bwd(g):
        if a_var:
            _send(a, g * (av >= bv), own=True)
        if b_var:
            _send(b, g * (av < bv), own=True)

    out.bwd = bwd
    return out


def sum_(a, axis=None, keepdims=False):
    av = value(a)
    out_data = av.sum(axis=axis, keepdims=keepdims)
    if not is_var(a):
        return out_data
    out = Var(np.asarray(out_data), (a,))

    def bwd(g):
        gg = np.asarray(g)
        if axis is not None and not keepdims:
            gg = np.expand_dims(gg, axis)
        a.add_grad(np.broadcast_to(gg, av.shape).copy() if gg.shape != av.shape else gg,
                   own=gg.shape != av.shape)

    out.bwd = bwd
    return out


def mean(a, axis=None, keepdims=False):
    av = value(a)
    n = av.size if axis is None else av.shape[axis]
    return mul(sum_(a, axis=axis, keepdims=keepdims), 1.0 / n)


def concat(parts, axis=1):
    vals = [value(p) for p in parts]
    out_data = np.concatenate(vals, axis=axis)
    if not any(is_var(p) for p in parts):
        return out_data
    out = Var(out_data, tuple(p for p in parts if is_var(p)))
    offsets = np.cumsum([0] + [v.shape[axis] for v in vals])

    def bwd(g):
        sl = [slice(None)] * g.ndim
        for p, lo, hi in zip(parts, offsets[:-1], offsets[1:]):
            if is_var(p):
                sl[axis] = slice(lo, hi)
                p.add_grad(g[tuple(sl)], own=False)

    out.bwd = bwd
    return out


def vstack(parts):
    return concat(parts, axis=0)


def cols(a, lo, hi):
    """Column slice a[:, lo:hi]."""
    av = value(a)
    out_data = av[:, lo:hi]
    if not is_var(a):
        return out_data
    out = Var(out_data, (a,))

    def bwd(g):
        full = np.zeros_like(av)
        full[:, lo:hi] = g
        a.add_grad(full, own=True)

    out.bwd = bwd
    return out


def rows(a, lo, hi):
    av = value(a)
    out_data = av[lo:hi]
    if not is_var(a):
        return out_data
    out = Var(out_data, (a,))

    def bwd(g):
        full = np.zeros_like(av)
        full[lo:hi] = g
        a.add_grad(full, own=True)

    out.bwd = bwd
    return out


def select_columns(a, idx):
    """Pick one column per row: out[i] = a[i, idx[i]], shape (n, 1)."""
    av = value(a)
    r = np.arange(av.shape[0])
    out_data = av[r, idx][:, None]
    if not is_var(a):
        return out_data
    out = Var(out_data, (a,))

    def bwd(g):
        full = np.zeros_like(av)
        np.add.at(full, (r, idx), g[:, 0])
        a.add_grad(full, own=True)

    out.bwd = bwd
    return out


def repeat_rows(a, k):
    """Each row repeated k times consecutively: (n, d) -> (n*k, d)."""
    av = value(a)
    out_data = np.repeat(av, k, axis=0)
    if not is_var(a):
        return out_data
    out = Var(out_data, (a,))
    out.bwd = lambda g: a.add_grad(
        g.reshape(av.shape[0], k, av.shape[1]).sum(axis=1), own=True)
    return out


def tile_rows(a, k):
    """Whole block tiled k times: (n, d) -> (k*n, d)."""
    av = value(a)
    out_data = np.tile(av, (k, 1))
    if not is_var(a):
        return out_data
    out = Var(out_data, (a,))
    out.bwd = lambda g: a.add_grad(
        g.reshape(k, av.shape[0], av.shape[1]).sum(axis=0), own=True)
    return out


def stop_gradient(a):
    return value(a)


# ---------------------------------------------------------------------------
# fused layers. Equivalent to compositions of the primitives above but with
# one graph node and in-place arithmetic on large activations, which is what
# the wide decode batches spend their time on.

_ACT_FWD = {
    "identity": None,
    "relu": lambda y: np.maximum(y, 0.0, out=y),
    "tanh": lambda y: np.tanh(y, out=y),
}


def _act_bwd_inplace(act, g, y, owned):
    """dL/d(pre-activation) from dL/d(post); mutates g when owned."""
    if act == "identity":
        return g, owned
    if act == "relu":
        mask = y > 0
        if owned:
            g *= mask
            return g, True
        return g * mask, True
    # tanh
    factor = 1.0 - y * y
    if owned:
        g *= factor
        return g, True
    return g * factor, True


def linear(x, w, b, act="identity"):
    """act(x @ w + b) as a single node."""
    xv, wv, bv = value(x), value(w), value(b)
    y = xv @ wv
    y += bv
    fwd_act = _ACT_FWD[act]
    if fwd_act is not None:
        y = fwd_act(y)
    if not (is_var(x) or is_var(w) or is_var(b)):
        return y
    out = Var(y, tuple(p for p in (x, w, b) if is_var(p)))

    def bwd(g):
        g, owned = _act_bwd_inplace(act, g, y, out._owned)
        if is_var(b):
            b.add_grad(g.sum(axis=0), own=True)
        if is_var(w):
            w.add_grad(xv.T @ g, own=True)
        if is_var(x):
            x.add_grad(g @ wv.T, own=True)

    out.bwd = bwd
    return out


def pair_bias_act(lat_part, cond_part, rep, tile, b, act="identity"):
    """act(repeat_rows(lat_part, rep) + tile_rows(cond_part, tile) + b)
    without materializing the tiled block. lat_part is (A, H) with A = tile *
    (C // rep)... more precisely: rows of the output follow lat-major order,
    each lat row repeated `rep` times, while cond_part (C, H) tiles `tile`
    times; A * rep == tile * C must hold.
    """
    lat_v, cond_v, bv = value(lat_part), value(cond_part), value(b)
    A, H = lat_v.shape
    C = cond_v.shape[0]
    R = A * rep
    if R != tile * C:
        raise ValueError("pair shapes disagree: %d*%d != %d*%d" % (A, rep, tile, C))
    y = np.repeat(lat_v, rep, axis=0)
    y3 = y.reshape(tile, C, H)
    y3 += cond_v.reshape(1, C, H)
    y += bv
    fwd_act = _ACT_FWD[act]
    if fwd_act is not None:
        y = fwd_act(y)
    if not (is_var(lat_part) or is_var(cond_part) or is_var(b)):
        return y
    out = Var(y, tuple(p for p in (lat_part, cond_part, b) if is_var(p)))

    def bwd(g):
        g, _ = _act_bwd_inplace(act, g, y, out._owned)
        if is_var(b):
            b.add_grad(g.sum(axis=0), own=True)
        if is_var(cond_part):
            cond_part.add_grad(g.reshape(tile, C, H).sum(axis=0), own=True)
        if is_var(lat_part):
            lat_part.add_grad(g.reshape(A, rep, H).sum(axis=1), own=True)

    out.bwd = bwd
    return out


def logsumexp(a, axis=1):
    """Stable log-sum-exp along `axis`, keepdims. The max shift is treated
    as a constant, which leaves the gradient exact."""
    av = value(a)
    m = av.max(axis=axis, keepdims=True)
    return add(log(sum_(exp(sub(a, m)), axis=axis, keepdims=True)), m)
