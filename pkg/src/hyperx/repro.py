"""Canonical desk-scale experiment grid and a caching runner.

Defines every training run the verification suite compares (method arms x
seeds per environment) and materializes them under a results directory; runs
that already have a metrics.json are skipped, so the suite is incremental.
Runs use float32 math to fit the single-core compute envelope; flip
`precision` here for float64 studies.

Usage:
    python3 -m hyperx.repro --list
    python3 -m hyperx.repro [--only PREFIX] [--results DIR]
"""

import argparse
import json
import os
import sys
import time

from . import config as config_mod
from .trainer.loop import Trainer

DEFAULT_RESULTS = os.environ.get("HYPERX_RESULTS", "results/acceptance")

_COMMON = dict(precision="float32", eval_num_tasks=16)

GRIDWORLD_SEEDS = 3
TREASURE_SEEDS = 10
SPARSEDIR_SEEDS = 5

VARIBAD_OFF = dict(rpf_weight_hyperstate=0.0, intrinsic_rew_for_vae_loss=False)


def run_specs():
    """name -> config-override dict for every acceptance run."""
    specs = {}
    gw = dict(env="gridworld", frame_budget=3_000_000, log_interval=50_000,
              final_eval_tasks=48, **_COMMON)
    for s in range(GRIDWORLD_SEEDS):
        specs["gridworld_hyperx_s%d" % s] = dict(gw, seed=s)
        specs["gridworld_varibad_s%d" % s] = dict(gw, seed=s, **VARIBAD_OFF)
        specs["gridworld_statenov_s%d" % s] = dict(
            gw, seed=s, rpf_input_mode="state", intrinsic_rew_for_vae_loss=False)

    tr = dict(env="treasure", frame_budget=5_000_000, log_interval=100_000,
              final_eval_tasks=40, **_COMMON)
    for s in range(TREASURE_SEEDS):
        specs["treasure_hyperx_s%d" % s] = dict(tr, seed=s)
        specs["treasure_varibad_s%d" % s] = dict(tr, seed=s, **VARIBAD_OFF)

    sd = dict(env="sparsedir", frame_budget=2_000_000, log_interval=50_000,
              final_eval_tasks=40, **_COMMON)
    for s in range(SPARSEDIR_SEEDS):
        specs["sparsedir_oracle_none_s%d" % s] = dict(
            sd, seed=s, belief_mode="oracle", rpf_weight_hyperstate=0.0)
        specs["sparsedir_oracle_rhyper_s%d" % s] = dict(
            sd, seed=s, belief_mode="oracle")
        specs["sparsedir_oracle_rstate_s%d" % s] = dict(
            sd, seed=s, belief_mode="oracle", rpf_input_mode="state")
        specs["sparsedir_hyperx_s%d" % s] = dict(sd, seed=s)
        specs["sparsedir_rhyper_s%d" % s] = dict(
            sd, seed=s, intrinsic_rew_for_vae_loss=False)
        specs["sparsedir_rerror_s%d" % s] = dict(
            sd, seed=s, rpf_weight_hyperstate=0.0)

    det = dict(env="gridworld", frame_budget=100_000, log_interval=20_000,
               final_eval_tasks=8, seed=1234, **_COMMON)
    specs["determinism_a"] = dict(det)
    specs["determinism_b"] = dict(det)
    return specs


def build_config(overrides):
    cfg = config_mod.default_config(overrides["env"])
    cfg.update(overrides)
    config_mod.validate(cfg)
    return cfg


def run_dir(name, results=DEFAULT_RESULTS):
    return os.path.join(results, name)


def is_done(name, results=DEFAULT_RESULTS):
    return os.path.exists(os.path.join(run_dir(name, results), "metrics.json"))


def ensure(name, results=DEFAULT_RESULTS, verbose=True):
    """Train run `name` unless its metrics already exist. Returns its dir."""
    specs = run_specs()
    if name not in specs:
        raise KeyError("unknown acceptance run %r" % name)
    out = run_dir(name, results)
    if is_done(name, results):
        return out
    cfg = build_config(specs[name])
    if verbose:
        print("[repro] training %s (%s frames)" % (name, cfg["frame_budget"]), flush=True)
    t0 = time.time()
    Trainer(cfg, outdir=out).train()
    if verbose:
        print("[repro] %s done in %.1f min" % (name, (time.time() - t0) / 60), flush=True)
    return out


def metrics(name, results=DEFAULT_RESULTS):
    with open(os.path.join(run_dir(name, results), "metrics.json")) as fh:
        return json.load(fh)


def main(argv=None):
    ap = argparse.ArgumentParser(prog="hyperx.repro")
    ap.add_argument("--results", default=DEFAULT_RESULTS)
    ap.add_argument("--only", default=None, help="run-name prefix filter")
    ap.add_argument("--list", action="store_true")
    args = ap.parse_args(argv)
    names = [n for n in run_specs() if args.only is None or n.startswith(args.only)]
    if args.list:
        for n in names:
            print("%s %s" % ("done" if is_done(n, args.results) else "todo", n))
        return 0
    pending = [n for n in names if not is_done(n, args.results)]
    print("[repro] %d runs, %d pending" % (len(names), len(pending)), flush=True)
    for name in pending:
        ensure(name, args.results)
    return 0


if __name__ == "__main__":
    sys.exit(main())
