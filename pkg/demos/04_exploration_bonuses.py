"""The two exploration bonuses and their bookkeeping.

Shows distillation novelty separating visited from unvisited hyper-states,
the reconstruction-error bonus shrinking as the belief model trains, and the
weight annealing / separate stream normalization that assembles the training
reward.
"""

import numpy as np

from hyperx.explore import BonusSchedule, HyperStateBuffer, RndPair, combine_rewards, rnd_update

rng = np.random.default_rng(6)
cfg = {"layers_rpf_prior": [256, 256], "layers_rpf_predictor": [256, 256],
       "rpf_output_dim": 128, "rpf_use_orthogonal_init": False,
       "rpf_norm_inputs": False, "rpf_init_weight_scale": 10.0, "lr_rpf": 1e-4}
pair = RndPair(6, cfg, rng)
buf = HyperStateBuffer(50_000, 6)

visited = rng.standard_normal((4_000, 6)) * 0.3          # a small home region
novel = rng.standard_normal((200, 6)) * 0.3 + 4.0        # far away
buf.add(visited)
print("training the predictor on the visited region...")
for i in range(1500):
    rnd_update(pair, buf, rng, 128)
print("novelty, visited region: %10.1f" % pair.bonus(visited[:200]).mean())
print("novelty, far region:     %10.1f" % pair.bonus(novel).mean())
print("the gap is what pushes the policy toward unseen (state, belief) pairs")

print()
sched = BonusSchedule(lambda_h=10.0, lambda_e=1.0, frame_budget=1_000_000, anneal=True)
ext = np.array([0.5, -0.1, 100.0, -0.1])
r_h = pair.bonus(np.vstack([visited[:2], novel[:2]]))
r_e = np.array([3.1, 2.9, 14.0, 13.5])
for frames in (0, 500_000, 1_000_000):
    sched.update_stats(ext, r_h, r_e)
    combined = combine_rewards(ext, r_h, r_e, sched, frames)
    lh, le = sched.weights(frames)
    print("frames %8d  lambda_h %5.2f lambda_e %4.2f  training reward %s"
          % (frames, lh, le, np.round(combined, 2)))
print("at the budget end the intrinsic terms contribute exactly zero.")
