"""A short end-to-end meta-training run (a few minutes of CPU).

Trains on the gridworld at a reduced frame budget, then evaluates and
compares against the scripted strategy anchors. Expect the agent to find G1
reliably at this budget; the full-budget comparison runs live under
results/acceptance (see `python3 -m hyperx.repro --list`).
"""

import json
import time

from hyperx.config import default_config
from hyperx.envs import scripted
from hyperx.trainer.loop import Trainer

cfg = default_config("gridworld")
cfg.update(seed=0, frame_budget=300_000, log_interval=50_000,
           precision="float32", eval_num_tasks=16, final_eval_tasks=32)

out = "runs/demo_gridworld"
print("training 3e5 frames into %s ..." % out)
t0 = time.time()
Trainer(cfg, outdir=out).train()
print("done in %.1f min" % ((time.time() - t0) / 60))

metrics = json.load(open(out + "/metrics.json"))
vals = scripted.strategy_values()
print("evaluation return %.1f  (G1-camp %.1f, G2-camp %.1f, G3-route %.1f)"
      % (metrics["mean_ep_return"], vals["g1_camp"], vals["g2_camp"], vals["g3_route"]))
print("training log: %s/log.csv; traces: %s/eval_traces.jsonl" % (out, out))
