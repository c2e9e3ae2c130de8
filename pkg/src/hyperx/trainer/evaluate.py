"""Deterministic evaluation rollouts: greedy actions, raw extrinsic rewards,
belief persisting across a task's episodes."""

import numpy as np

from ..envs import BatchMetaEnv


def evaluate(agent, env_id, n_tasks, episodes, rng, trace_writer=None, trace_tasks=0):
    """Run `episodes` rollouts on each of `n_tasks` fresh tasks.

    Returns a metrics dict with per-episode-index return/success statistics
    (mean and standard error over tasks) and, per info flag, the first step
    index at which the flag fired in each (episode, task) — the raw material
    for strategy probes. Bonus values are logged to traces for inspection but
    never touch the returns.
    """
    env = BatchMetaEnv(env_id, n_tasks, rng, max_rollouts=episodes)
    obs = env.reset_tasks()
    belief = agent.initial_belief(n_tasks)

    horizon = env.spec.horizon
    returns = np.zeros((episodes, n_tasks))
    success = np.zeros((episodes, n_tasks), dtype=bool)
    first_steps = {}

    for k in range(episodes):
        for t in range(horizon):
            bvec = agent.belief_vec(belief)
            pol_o, pol_b = agent.policy_inputs(obs, bvec)
            _, env_action, _, _ = agent.policy.act(pol_o, pol_b, rng, mode="greedy")
            obs, tno, reward, _, _, info = env.step(env_action)
            enc_action = agent.encode_action(env_action if env.spec.discrete else None, env_action)
            native = env.native_action(env_action) if not env.spec.discrete else env_action
            belief = agent.encode(belief, tno, enc_action, reward,
                                  native_action=native if not env.spec.discrete else None,
                                  next_state=tno)
            returns[k] += reward
            if "success" in info:
                success[k] |= info["success"]
            for key, flags in info.items():
                if np.asarray(flags).dtype == bool:
                    arr = first_steps.setdefault(key, -np.ones((episodes, n_tasks), dtype=np.int64))
                    hit = flags & (arr[k] < 0)
                    arr[k][hit] = t
            if trace_writer is not None:
                bv = agent.belief_vec(belief)
                half = bv.shape[1] // 2
                r_h = agent.rnd.bonus(agent.hyper_inputs(tno, bv))
                for i in range(min(trace_tasks, n_tasks)):
                    trace_writer.step(
                        task=i, rollout=k, t=t, state=tno[i],
                        action=np.atleast_1d(native[i]), reward=reward[i],
                        r_hyper=r_h[i], r_error=0.0,
                        belief_mu=bv[i, :half], belief_logvar=bv[i, half:],
                        info={kk: vv[i] for kk, vv in info.items()
                              if np.asarray(vv).dtype == bool})

    mean_ep = returns.mean(axis=1)
    se_ep = returns.std(axis=1, ddof=1) / np.sqrt(n_tasks) if n_tasks > 1 else np.zeros(episodes)
    metrics = {
        "env": env_id,
        "n_tasks": n_tasks,
        "episodes": episodes,
        "mean_ep_return": float(mean_ep.mean()),
        "per_episode_return": [float(v) for v in mean_ep],
        "per_episode_return_se": [float(v) for v in se_ep],
        "success_rate": float(success.mean()),
        "per_episode_success": [float(v) for v in success.mean(axis=1)],
        "returns": returns.tolist(),
        "first_steps": {k: v.tolist() for k, v in first_steps.items()},
    }
    return metrics
