"""Named parameter storage with persistent gradient accumulators."""

import numpy as np

from .autodiff import Var


class Param(Var):
    """A leaf Var whose gradient buffer persists across backward calls."""

    __slots__ = ("path",)

    def __init__(self, path, data):
        super().__init__(data)
        self.path = path
        self.grad = np.zeros_like(data)
        self._owned = True  # the accumulator is ours; always add in place


class ParamStore:
    """Flat map from parameter-path string to a Param.

    Each parameter owns exactly one gradient accumulator of matching shape;
    paths are unique and keep their registration order (which makes
    save/load and flattening deterministic).
    """

    def __init__(self, dtype=np.float64):
        self.dtype = np.dtype(dtype)
        self._params = {}

    def register(self, path, data):
        if path in self._params:
            raise ValueError("duplicate parameter path %r" % path)
        p = Param(path, np.ascontiguousarray(data, dtype=self.dtype))
        self._params[path] = p
        return p

    def __getitem__(self, path):
        return self._params[path]

    def __contains__(self, path):
        return path in self._params

    def __iter__(self):
        return iter(self._params.values())

    def __len__(self):
        return len(self._params)

    def paths(self):
        return list(self._params.keys())

    def zero_grads(self):
        for p in self._params.values():
            p.grad.fill(0.0)

    def num_values(self):
        return sum(p.data.size for p in self._params.values())

    def grad_norm(self):
        sq = 0.0
        for p in self._params.values():
            sq += float(np.square(p.grad).sum())
        return np.sqrt(sq)

    def clip_grad_norm(self, max_norm):
        """Scale all gradients so their global L2 norm is at most max_norm."""
        norm = self.grad_norm()
        if norm > max_norm and norm > 0.0:
            scale = max_norm / norm
            for p in self._params.values():
                p.grad *= scale
        return norm

    def copy_values(self):
        return {path: p.data.copy() for path, p in self._params.items()}

    def load_values(self, values, strict=True):
        for path, p in self._params.items():
            if path in values:
                arr = np.asarray(values[path], dtype=self.dtype)
                if arr.shape != p.data.shape:
                    raise ValueError(
                        "shape mismatch for %r: stored %r, expected %r"
                        % (path, arr.shape, p.data.shape)
                    )
                p.data[...] = arr
            elif strict:
                raise KeyError("missing parameter %r" % path)
