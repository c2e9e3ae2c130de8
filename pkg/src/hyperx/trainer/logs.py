"""Run-directory writers: CSV training log and JSON-lines traces."""

import json
import os

CSV_COLUMNS = [
    "frames", "iter", "mean_ep_return", "success_rate", "ppo_loss",
    "value_loss", "entropy", "vae_recon", "vae_kl", "rnd_loss",
    "lambda_h", "lambda_e", "mean_r_hyper", "mean_r_error",
]


def _fmt(x):
    if isinstance(x, (int,)) :
        return str(x)
    return format(float(x), ".12g")


class CsvLogger:
    def __init__(self, path):
        self.path = path
        self._fh = open(path, "w", encoding="utf-8")
        self._fh.write(",".join(CSV_COLUMNS) + "\n")
        self._fh.flush()

    def row(self, **values):
        missing = set(CSV_COLUMNS) - set(values)
        if missing:
            raise ValueError("missing CSV columns: %s" % sorted(missing))
        self._fh.write(",".join(_fmt(values[c]) for c in CSV_COLUMNS) + "\n")
        self._fh.flush()

    def close(self):
        self._fh.close()


class TraceWriter:
    """One JSON object per line; one line per environment step."""

    def __init__(self, path):
        self.path = path
        self._fh = open(path, "w", encoding="utf-8")

    def step(self, task, rollout, t, state, action, reward, r_hyper, r_error,
             belief_mu, belief_logvar, info):
        rec = {
            "task": int(task), "rollout": int(rollout), "t": int(t),
            "state": [float(v) for v in state],
            "action": [float(v) for v in action] if hasattr(action, "__len__") else [float(action)],
            "reward": float(reward),
            "r_hyper": float(r_hyper), "r_error": float(r_error),
            "belief_mu": [float(v) for v in belief_mu],
            "belief_logvar": [float(v) for v in belief_logvar],
            "info": {k: bool(v) for k, v in info.items()},
        }
        self._fh.write(json.dumps(rec) + "\n")

    def close(self):
        self._fh.close()


def write_json(path, obj):
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
