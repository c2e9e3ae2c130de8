"""Checkpoint container for parameters, optimizer moments, and extras.

Format: a numpy .npz archive. Keys are flat path strings:

    params:<store>/<param-path>   -> little-endian float array
    opt:<store>/t                 -> optimizer step counter
    opt:<store>/m/<param-path>    -> first-moment estimate
    opt:<store>/v/<param-path>    -> second-moment estimate
    extra:<name>                  -> caller-defined arrays (counters, RNG
                                     state blobs, normalizer stats, ...)
    meta:config                   -> the run's config echo (utf-8 text)

Arrays are written in '<f8' (or '<f4') so files are portable across hosts;
a reload followed by a forward pass is bit-identical to the saved model.
"""

import io
import json

import numpy as np


def save(path, stores, optimizers=None, extra=None, config_text=None):
    payload = {}
    for name, store in stores.items():
        for p in store:
            payload["params:%s/%s" % (name, p.path)] = p.data
    for name, opt in (optimizers or {}).items():
        for key, arr in opt.state().items():
            payload["opt:%s/%s" % (name, key)] = arr
    for key, arr in (extra or {}).items():
        payload["extra:" + key] = np.asarray(arr)
    if config_text is not None:
        payload["meta:config"] = np.frombuffer(config_text.encode("utf-8"), dtype=np.uint8)
    with open(path, "wb") as fh:
        np.savez(fh, **payload)


def load(path):
    """Returns (params, opt_states, extra, config_text) as nested dicts."""
    with np.load(path, allow_pickle=False) as npz:
        raw = {k: npz[k] for k in npz.files}
    params, opts, extra = {}, {}, {}
    config_text = None
    for key, arr in raw.items():
        kind, _, rest = key.partition(":")
        if kind == "params":
            store, _, ppath = rest.partition("/")
            params.setdefault(store, {})[ppath] = arr
        elif kind == "opt":
            store, _, opath = rest.partition("/")
            opts.setdefault(store, {})[opath] = arr
        elif kind == "extra":
            extra[rest] = arr
        elif kind == "meta" and rest == "config":
            config_text = arr.tobytes().decode("utf-8")
    return params, opts, extra, config_text


def pack_json(obj):
    """Encode a JSON-serializable object as a uint8 array for `extra`."""
    return np.frombuffer(json.dumps(obj).encode("utf-8"), dtype=np.uint8)


def unpack_json(arr):
    return json.loads(np.asarray(arr, dtype=np.uint8).tobytes().decode("utf-8"))
