"""Variational belief inference on interaction histories.

Collects random-walk meta-episodes from the gridworld, trains the
trajectory VAE for a while, and shows the two signatures of working
inference: the objective falls, and the posterior variance contracts as a
within-episode history accumulates evidence.
"""

import numpy as np

from hyperx.belief import BeliefVae, VaeBuffer
from hyperx.config import default_config
from hyperx.envs import BatchMetaEnv

cfg = default_config("gridworld")
rng = np.random.default_rng(3)
env = BatchMetaEnv("gridworld", 16, np.random.default_rng(4))
vae = BeliefVae(env.spec.obs_dim, env.spec.n_actions, cfg, rng)
buf = VaeBuffer(2_000, env.spec.steps_per_task, env.spec.obs_dim, env.spec.n_actions)

obs = env.reset_tasks()
steps = env.spec.steps_per_task
prev = np.zeros((16, steps, 2))
nxt = np.zeros((16, steps, 2))
act = np.zeros((16, steps, 5))
rew = np.zeros((16, steps))
for k in range(40):  # 40 meta-episodes per worker
    for t in range(steps):
        a = rng.integers(0, 5, size=16)
        new_obs, tno, r, _, task_done, _ = env.step(a)
        prev[:, t] = obs
        nxt[:, t] = tno
        onehot = np.zeros((16, 5))
        onehot[np.arange(16), a] = 1.0
        act[:, t] = onehot
        rew[:, t] = r
        obs = new_obs
    for i in range(16):
        buf.add(prev[i], act[i], rew[i], nxt[i])
        vae.observe_rewards(rew[i])
    obs = env.reset_tasks()

print("buffer holds %d trajectories" % len(buf))
upd = np.random.default_rng(5)
for i in range(300):
    recon, kl = vae.update(buf, upd)
    if i % 75 == 0 or i == 299:
        print("update %3d  recon %8.3f  kl %7.3f" % (i, recon, kl))

# posterior contraction along one fresh history
env.reset_tasks()
b = vae.encoder.initial_belief(16)
var0 = float(np.exp(b.logvar).mean())
for t in range(steps):
    a = rng.integers(0, 5, size=16)
    new_obs, tno, r, _, _, _ = env.step(a)
    onehot = np.zeros((16, 5))
    onehot[np.arange(16), a] = 1.0
    b = vae.encoder.encode_step(b, tno, onehot, r)
print("mean posterior variance: prior %.3f -> after %d steps %.3f"
      % (var0, steps, float(np.exp(b.logvar).mean())))
