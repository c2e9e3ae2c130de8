"""Figures from run directories (requires the hyperx-plots package and a run
produced by demos/06_train_small.py)."""

import os
import sys

if not os.path.isdir("runs/demo_gridworld"):
    sys.exit("run demos/06_train_small.py first")

from hyperx_plots import RunSet, learning_curve, trace_map

rs = RunSet(["runs/demo_gridworld"])
learning_curve([rs], "mean_ep_return", "runs/demo_curve.svg", labels=["demo"])
print("wrote runs/demo_curve.svg")

summary = trace_map("runs/demo_gridworld/eval_traces.jsonl", "gridworld",
                    "runs/demo_traces.svg")
print("wrote runs/demo_traces.svg (%d rollouts, %d points)"
      % (summary["rollouts"], summary["points"]))
