"""Learning curves with confidence bands across seeds."""

import numpy as np
from scipy import stats

from .io import RunSet


def ci_halfwidth(values, confidence=0.95):
    """t-based confidence half-width over the seed axis (axis 0)."""
    values = np.asarray(values)
    n = values.shape[0]
    if n < 2:
        return np.zeros(values.shape[1:])
    se = values.std(axis=0, ddof=1) / np.sqrt(n)
    return stats.t.ppf(0.5 + confidence / 2.0, df=n - 1) * se


def smooth(y, window):
    if window and window > 1:
        kernel = np.ones(window) / window
        pad = np.concatenate([np.full(window - 1, y[0]), y])
        return np.convolve(pad, kernel, mode="valid")
    return np.asarray(y)


def curve_data(runset: RunSet, metric, window=None, confidence=0.95):
    """Common frame grid (linear interpolation where grids differ), the mean
    curve over seeds, and the CI half-width."""
    logs = runset.logs()
    for log in logs:
        if metric not in log:
            raise KeyError("metric %r not logged; available: %s"
                           % (metric, sorted(logs[0].keys())))
    grids = [np.asarray(log["frames"]) for log in logs]
    common = grids[0]
    if any(len(g) != len(common) or not np.array_equal(g, common) for g in grids):
        lo = max(g[0] for g in grids)
        hi = min(g[-1] for g in grids)
        common = np.linspace(lo, hi, max(len(g) for g in grids))
    rows = []
    for log, grid in zip(logs, grids):
        y = smooth(np.asarray(log[metric]), window)
        rows.append(np.interp(common, grid, y))
    rows = np.stack(rows)
    return common, rows.mean(axis=0), ci_halfwidth(rows, confidence), rows


def learning_curve(runsets, metric, out_path, window=None, labels=None, title=None):
    """Render one or more run sets as mean curves with 95% CI bands."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for i, rs in enumerate(runsets):
        frames, mean, half, _ = curve_data(rs, metric, window)
        label = labels[i] if labels else ",".join(str(s) for s in rs.seeds)
        line, = ax.plot(frames, mean, label=label)
        ax.fill_between(frames, mean - half, mean + half,
                        color=line.get_color(), alpha=0.2, linewidth=0)
    ax.set_xlabel("frames")
    ax.set_ylabel(metric)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
