"""Per-episode success-rate bars across seeds."""

import numpy as np

from .io import RunSet, read_metrics


def success_data(runset: RunSet):
    rates = []
    for d in runset.run_dirs:
        m = read_metrics(d)
        rates.append(m["per_episode_success"])
    rates = np.asarray(rates, dtype=float)
    mean = rates.mean(axis=0)
    se = (rates.std(axis=0, ddof=1) / np.sqrt(len(rates))
          if len(rates) > 1 else np.zeros(rates.shape[1]))
    return mean, se


def success_bars(runsets, out_path, labels=None, title=None):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    width = 0.8 / len(runsets)
    for i, rs in enumerate(runsets):
        mean, se = success_data(rs)
        pos = np.arange(1, len(mean) + 1) + (i - (len(runsets) - 1) / 2) * width
        label = labels[i] if labels else rs.run_dirs[0]
        ax.bar(pos, mean, width=width, yerr=se, capsize=3, label=label)
    ax.set_xlabel("episode")
    ax.set_ylabel("success rate")
    ax.set_ylim(0, 1.05)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
