"""Trajectory overlays on environment schematics."""

import numpy as np

from .io import read_traces


def _group_by_rollout(records):
    keyed = {}
    for rec in records:
        keyed.setdefault((rec["task"], rec["rollout"]), []).append(rec)
    for key in keyed:
        keyed[key].sort(key=lambda r: r["t"])
    return keyed


def _setup(ax, env):
    if env == "treasure":
        for radius, style in ((1.0, "-"), (0.5, "--"), (0.1, ":")):
            theta = np.linspace(0, 2 * np.pi, 256)
            ax.plot(radius * np.cos(theta), radius * np.sin(theta),
                    style, color="gray", linewidth=1)
        ax.set_xlim(-1.6, 1.6)
        ax.set_ylim(-1.6, 1.6)
        ax.set_aspect("equal")
    elif env == "gridworld":
        walk = np.zeros((15, 3), dtype=bool)
        for x0 in (0, 6, 12):
            walk[x0:x0 + 3, :] = True
        walk[3:6, 1] = True
        walk[9:12, 1] = True
        for x in range(15):
            for y in range(3):
                color = "white" if walk[x, y] else "dimgray"
                ax.add_patch(__import__("matplotlib.patches", fromlist=["Rectangle"])
                             .Rectangle((x - 0.5, y - 0.5), 1, 1, facecolor=color,
                                        edgecolor="lightgray", linewidth=0.5))
        ax.set_xlim(-0.6, 14.6)
        ax.set_ylim(-0.6, 2.6)
        ax.set_aspect("equal")
    elif env == "sparsedir":
        ax.axvline(-5.0, color="gray", linestyle="--", linewidth=1)
        ax.axvline(5.0, color="gray", linestyle="--", linewidth=1)
        ax.set_xlabel("position")
        ax.set_ylabel("time step")
    elif env == "pointrobot":
        theta = np.linspace(0, np.pi, 128)
        ax.plot(np.cos(theta), np.sin(theta), "-", color="gray", linewidth=1)
        ax.set_aspect("equal")
    else:
        raise ValueError("no map renderer for env %r" % env)


def trace_map(trace_path, env, out_path, shade_bonus=False, max_rollouts=8):
    """Draw rollout trajectories over the environment schematic.

    Returns a summary dict: rollouts drawn, points, malformed lines skipped.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    records, skipped = read_traces(trace_path)
    grouped = _group_by_rollout(records)
    fig, ax = plt.subplots(figsize=(5, 5))
    _setup(ax, env)
    drawn = 0
    points = 0
    for key in sorted(grouped)[:max_rollouts]:
        recs = grouped[key]
        states = np.array([r["state"] for r in recs])
        if env == "sparsedir":
            xs, ys = states[:, 0], np.array([r["t"] for r in recs])
        else:
            xs, ys = states[:, 0], states[:, 1]
        ax.plot(xs, ys, "-", alpha=0.7, linewidth=1.2)
        if shade_bonus:
            bonus = np.array([r.get("r_hyper", 0.0) for r in recs])
            span = bonus.max() - bonus.min()
            if span > 0:
                ax.scatter(xs, ys, c=(bonus - bonus.min()) / span, cmap="Reds",
                           s=8, zorder=3)
        drawn += 1
        points += len(recs)
    if env == "sparsedir":
        ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(out_path)
    plt.close(fig)
    return {"rollouts": drawn, "points": points, "skipped_lines": skipped,
            "out": out_path}
