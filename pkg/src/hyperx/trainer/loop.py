"""The outer meta-training loop.

Each iteration: collect `policy_num_steps` frames from every parallel task
instance (with online belief updates and bonus computation), then run the
policy update, the belief-model updates, and the novelty-predictor update,
in that order. Evaluation rows are appended to the CSV log on a fixed frame
cadence, so two runs with the same seed produce byte-identical logs.
"""

import json
import os
import time

import numpy as np

from ..belief.buffer import VaeBuffer
from ..envs import BatchMetaEnv
from ..explore.bonus import BonusSchedule
from ..explore.rnd import HyperStateBuffer, rnd_update
from ..policy.buffer import RolloutBuffer
from ..policy.ppo import PPO
from ..substrate import checkpoint
from .agent import Agent
from .evaluate import evaluate
from .logs import CsvLogger, TraceWriter, write_json
from .. import config as config_mod


def _spawn_rngs(seed):
    names = ["init", "env", "policy", "vae", "rnd", "bonus", "eval"]
    seqs = np.random.SeedSequence(seed).spawn(len(names))
    return {n: np.random.default_rng(s) for n, s in zip(names, seqs)}


class Trainer:
    def __init__(self, cfg, outdir=None):
        config_mod.validate(cfg)
        self.cfg = cfg
        self.outdir = outdir
        self.rngs = _spawn_rngs(cfg["seed"])
        self.n = cfg["num_processes"]

        self.env = BatchMetaEnv(cfg["env"], self.n, self.rngs["env"],
                                max_rollouts=cfg["max_rollouts_per_task"])
        self.spec = self.env.spec
        self.agent = Agent(cfg, self.spec, self.rngs["init"])
        self.ppo = PPO(self.agent.policy, cfg)

        self.lambda_h = cfg["rpf_weight_hyperstate"]
        self.lambda_e = (cfg["intrinsic_weight_vae_loss"]
                         if cfg["intrinsic_rew_for_vae_loss"] and not self.agent.oracle_mode
                         else 0.0)
        self.schedule = BonusSchedule(
            self.lambda_h, self.lambda_e, cfg["frame_budget"],
            anneal=cfg["intrinsic_rew_anneal_weight"],
            normalize_intrinsic=cfg["intrinsic_rew_normalise_rewards"],
            normalize_extrinsic=cfg["norm_rew_for_policy"],
            clip_intrinsic=cfg["intrinsic_rew_clip_rewards"],
            clip_extrinsic=cfg["norm_rew_clip_param"])

        T = cfg["policy_num_steps"]
        self.rollouts = RolloutBuffer(T, self.n, self.spec.obs_dim,
                                      self.agent.belief_dim,
                                      self.spec.action_dim, self.spec.discrete)
        steps = self.spec.steps_per_task
        self.vae_buffer = VaeBuffer(cfg["size_vae_buffer"], steps, self.spec.obs_dim,
                                    self.agent.action_enc_dim, self.agent.dtype)
        self.rnd_buffer = HyperStateBuffer(cfg["size_rpf_buffer"], self.agent.rnd_dim,
                                           self.agent.dtype)

        # in-progress meta-episode storage, one slot per worker
        self.traj_prev = np.zeros((self.n, steps, self.spec.obs_dim))
        self.traj_next = np.zeros((self.n, steps, self.spec.obs_dim))
        self.traj_act = np.zeros((self.n, steps, self.agent.action_enc_dim))
        self.traj_rew = np.zeros((self.n, steps))
        self.traj_len = np.zeros(self.n, dtype=np.int64)

        self.frames = 0
        self.iter = 0
        self.next_log = cfg["log_interval"]
        self._nonfinite_strikes = 0

        self.obs = self.env.reset_tasks()
        self.belief = self.agent.initial_belief(self.n)
        self._seed_rnd_buffer()

    # ------------------------------------------------------------------

    def _seed_rnd_buffer(self):
        if self.lambda_h != 0.0:
            bvec = self.agent.belief_vec(self.belief)
            self.rnd_buffer.add(self.agent.hyper_inputs(self.obs, bvec))

    def _belief_vec(self):
        return self.agent.belief_vec(self.belief)

    def collect(self):
        """Fill the rollout buffer with one batch of environment steps."""
        cfg = self.cfg
        agent = self.agent
        for _ in range(cfg["policy_num_steps"]):
            bvec = self._belief_vec()
            pol_o, pol_b = agent.policy_inputs(self.obs, bvec, update_stats=True)
            stored, env_action, logp, value = agent.policy.act(
                pol_o, pol_b, self.rngs["policy"], mode="sample")
            prev_obs = self.obs
            obs, tno, reward, rollout_done, task_done, info = self.env.step(env_action)
            native = self.env.native_action(env_action)
            enc_action = agent.encode_action(stored, native)

            new_belief = agent.encode(self.belief, tno, enc_action, reward,
                                      native_action=native if not self.spec.discrete else None,
                                      next_state=tno)
            bvec_next = agent.belief_vec(new_belief)

            if self.lambda_h != 0.0:
                hyper = agent.hyper_inputs(tno, bvec_next)
                r_hyper = agent.rnd.bonus(hyper)
                self.rnd_buffer.add(hyper)
            else:
                r_hyper = np.zeros(self.n)
            if self.lambda_e != 0.0:
                r_error = agent.vae.reconstruction_error(
                    new_belief.mu, new_belief.logvar, prev_obs.astype(agent.dtype),
                    enc_action, reward, tno.astype(agent.dtype), self.rngs["bonus"])
            else:
                r_error = np.zeros(self.n)

            self.schedule.update_stats(reward, r_hyper, r_error)
            train_reward = self.schedule.combine(reward, r_hyper, r_error, self.frames)

            self.rollouts.insert(pol_o, pol_b, stored, logp, value, train_reward,
                                 reward, r_hyper, r_error,
                                 done=task_done.astype(np.float64),
                                 truncated=task_done.astype(np.float64))

            # mirror the transition into the meta-episode slots
            idx = np.arange(self.n)
            L = self.traj_len
            self.traj_prev[idx, L] = prev_obs
            self.traj_next[idx, L] = tno
            self.traj_act[idx, L] = enc_action
            self.traj_rew[idx, L] = reward
            self.traj_len += 1

            self.belief = new_belief
            self.obs = obs
            self.frames += self.n

            if task_done.any():
                for i in np.where(task_done)[0]:
                    self.vae_buffer.add(self.traj_prev[i], self.traj_act[i],
                                        self.traj_rew[i], self.traj_next[i])
                    if agent.vae is not None:
                        agent.vae.observe_rewards(self.traj_rew[i])
                self.traj_len[task_done] = 0
                self.obs = self.env.reset_tasks(task_done)
                self.belief = agent.reset_belief_rows(self.belief, task_done)
                if self.lambda_h != 0.0:
                    fresh_vec = self._belief_vec()
                    self.rnd_buffer.add(agent.hyper_inputs(
                        self.obs[task_done], fresh_vec[task_done]))

    def update(self):
        """Policy, belief model, then novelty predictor."""
        cfg = self.cfg
        stats = {"ppo_loss": 0.0, "value_loss": 0.0, "entropy": 0.0,
                 "vae_recon": 0.0, "vae_kl": 0.0, "rnd_loss": 0.0}
        pol_o, pol_b = self.agent.policy_inputs(self.obs, self._belief_vec())
        _, _, _, bootstrap = self.agent.policy.act(pol_o, pol_b, self.rngs["policy"],
                                                   mode="greedy")
        adv, rets = self.rollouts.compute_returns(
            bootstrap, cfg["policy_gamma"], cfg["policy_tau"],
            use_gae=cfg["policy_use_gae"],
            use_proper_time_limits=cfg["use_proper_time_limits"])
        if self.iter >= cfg["pretrain_len"]:
            stats.update(self.ppo.update(self.rollouts, adv, rets, self.rngs["policy"]))
        if self.agent.vae is not None:
            vae_stats = self.agent.vae.update(self.vae_buffer, self.rngs["vae"])
            if vae_stats is not None:
                stats["vae_recon"], stats["vae_kl"] = vae_stats
        if self.lambda_h != 0.0 and self.iter % cfg["rpf_update_frequency"] == 0:
            loss = rnd_update(self.agent.rnd, self.rnd_buffer, self.rngs["rnd"],
                              cfg["rpf_batch_size"])
            if loss is not None:
                stats["rnd_loss"] = loss
        return stats

    # ------------------------------------------------------------------

    def train(self):
        """Run to the frame budget; returns the output directory."""
        cfg = self.cfg
        out = self.outdir
        if out is not None:
            os.makedirs(out, exist_ok=True)
            with open(os.path.join(out, "config.txt"), "w", encoding="utf-8") as fh:
                fh.write(config_mod.config_text(cfg))
            log = CsvLogger(os.path.join(out, "log.csv"))
        else:
            log = None
        next_save = cfg["save_interval"] or float("inf")
        t_start = time.time()
        stats = {"ppo_loss": 0.0, "value_loss": 0.0, "entropy": 0.0,
                 "vae_recon": 0.0, "vae_kl": 0.0, "rnd_loss": 0.0}
        while self.frames < cfg["frame_budget"]:
            self.collect()
            if self.frames >= cfg["precollect_len"]:
                try:
                    stats = self.update()
                    self._nonfinite_strikes = 0
                except FloatingPointError as err:
                    self._nonfinite_strikes += 1
                    if self._nonfinite_strikes >= 3:
                        if out is not None:
                            self.save(os.path.join(out, "crash.npz"))
                        raise RuntimeError(
                            "aborting: non-finite losses in 3 consecutive updates "
                            "(seed %d, frames %d): %s" % (cfg["seed"], self.frames, err))
            self.rollouts.reset()
            self.iter += 1

            if log is not None and self.frames >= self.next_log:
                while self.next_log <= self.frames:
                    self.next_log += cfg["log_interval"]
                metrics = evaluate(self.agent, cfg["env"], cfg["eval_num_tasks"],
                                   cfg["max_rollouts_per_task"], self._eval_rng())
                lh, le = self.schedule.weights(self.frames)
                log.row(frames=self.frames, iter=self.iter,
                        mean_ep_return=metrics["mean_ep_return"],
                        success_rate=metrics["success_rate"],
                        ppo_loss=stats["ppo_loss"], value_loss=stats["value_loss"],
                        entropy=stats["entropy"], vae_recon=stats["vae_recon"],
                        vae_kl=stats["vae_kl"], rnd_loss=stats["rnd_loss"],
                        lambda_h=lh, lambda_e=le,
                        mean_r_hyper=float(self.rollouts.r_hyper.mean()),
                        mean_r_error=float(self.rollouts.r_error.mean()))
            if out is not None and self.frames >= next_save:
                next_save += cfg["save_interval"]
                self.save(os.path.join(out, "checkpoint.npz"))

        if out is not None:
            self.save(os.path.join(out, "checkpoint.npz"))
            tracer = TraceWriter(os.path.join(out, "eval_traces.jsonl"))
            metrics = evaluate(self.agent, cfg["env"], cfg["final_eval_tasks"],
                               cfg["max_rollouts_per_task"], self._eval_rng(),
                               trace_writer=tracer, trace_tasks=min(16, cfg["final_eval_tasks"]))
            tracer.close()
            metrics["wall_seconds"] = time.time() - t_start
            metrics["frames"] = self.frames
            metrics["seed"] = cfg["seed"]
            write_json(os.path.join(out, "metrics.json"), metrics)
            log.close()
        return out

    def _eval_rng(self):
        # evaluation draws are a deterministic function of training progress
        return np.random.default_rng(
            np.random.SeedSequence([self.cfg["seed"], 7741, self.iter]))

    # ------------------------------------------------------------------

    def save(self, path, full=False):
        extra = {"frames": np.asarray(self.frames), "iter": np.asarray(self.iter)}
        extra.update(self.agent.normalizer_state())
        for k, v in self.schedule.state().items():
            extra["schedule/" + k] = v
        if full:
            extra["full/obs"] = self.obs
            if self.agent.oracle_mode:
                extra["full/belief"] = self.belief
            else:
                extra["full/belief_mu"] = self.belief.mu
                extra["full/belief_logvar"] = self.belief.logvar
                extra["full/belief_h"] = self.belief.h
            extra["full/env_tasks"] = self.env.tasks
            extra["full/env_state"] = self.env.state
            extra["full/env_t"] = self.env.t_in_rollout
            extra["full/env_rollout"] = self.env.rollout_idx
            for name in ("traj_prev", "traj_next", "traj_act", "traj_rew", "traj_len"):
                extra["full/" + name] = getattr(self, name)
            for name, buf in (("vae_buffer", self.vae_buffer), ("rnd_buffer", self.rnd_buffer)):
                for k, v in buf.state().items():
                    extra["full/%s/%s" % (name, k)] = v
            for name, rng in self.rngs.items():
                extra["full/rng/" + name] = checkpoint.pack_json(rng.bit_generator.state)
        optimizers = {"policy": self.ppo.optimizer, "rnd": self.agent.rnd.optimizer}
        if self.agent.vae is not None:
            optimizers["vae"] = self.agent.vae.optimizer
        checkpoint.save(path, self.agent.stores(), optimizers, extra,
                        config_text=config_mod.config_text(self.cfg))

    def restore(self, path):
        params, opts, extra, _ = checkpoint.load(path)
        self.agent.load_params(params)
        self.ppo.optimizer.load_state(opts["policy"])
        self.agent.rnd.optimizer.load_state(opts["rnd"])
        if self.agent.vae is not None:
            self.agent.vae.optimizer.load_state(opts["vae"])
        self.agent.load_normalizer_state(extra)
        self.schedule.load_state({k.split("/", 1)[1]: v for k, v in extra.items()
                                  if k.startswith("schedule/")})
        self.frames = int(extra["frames"])
        self.iter = int(extra["iter"])
        self.next_log = (self.frames // self.cfg["log_interval"] + 1) * self.cfg["log_interval"]
        if "full/obs" in extra:
            self.obs = extra["full/obs"]
            if self.agent.oracle_mode:
                self.belief = extra["full/belief"]
            else:
                self.belief.mu = extra["full/belief_mu"]
                self.belief.logvar = extra["full/belief_logvar"]
                self.belief.h = extra["full/belief_h"]
            self.env.tasks = extra["full/env_tasks"]
            self.env.state = extra["full/env_state"]
            self.env.t_in_rollout = extra["full/env_t"].astype(np.int64)
            self.env.rollout_idx = extra["full/env_rollout"].astype(np.int64)
            for name in ("traj_prev", "traj_next", "traj_act", "traj_rew"):
                getattr(self, name)[...] = extra["full/" + name]
            self.traj_len = extra["full/traj_len"].astype(np.int64)
            self.vae_buffer.load_state(
                {k.split("/", 2)[2]: v for k, v in extra.items()
                 if k.startswith("full/vae_buffer/")})
            self.rnd_buffer.load_state(
                {k.split("/", 2)[2]: v for k, v in extra.items()
                 if k.startswith("full/rnd_buffer/")})
            for name, rng in self.rngs.items():
                rng.bit_generator.state = checkpoint.unpack_json(extra["full/rng/" + name])


def train(cfg, outdir):
    """Train per config, writing logs/checkpoint/metrics into outdir."""
    trainer = Trainer(cfg, outdir)
    return trainer.train()


def load_agent(checkpoint_path):
    """Rebuild an Agent (inference-ready) from a checkpoint file."""
    params, _, extra, cfg_text = checkpoint.load(checkpoint_path)
    cfg = config_mod.load_config_from_text(cfg_text)
    from ..envs import get_spec

    agent = Agent(cfg, get_spec(cfg["env"]), np.random.default_rng(0))
    agent.load_params(params)
    agent.load_normalizer_state(extra)
    return agent, cfg
