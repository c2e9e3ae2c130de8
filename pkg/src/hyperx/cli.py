"""Command-line entry points: train, evaluate, gridsearch."""

import argparse
import itertools
import os
import sys

import numpy as np

from . import config as config_mod
from .trainer import evaluate as eval_mod
from .trainer.logs import TraceWriter, write_json
from .trainer.loop import Trainer, load_agent


def _add_train(sub):
    p = sub.add_parser("train", help="meta-train per a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--outdir", default=None)
    p.add_argument("--override", nargs="*", default=[], metavar="KEY=VALUE")


def _add_evaluate(sub):
    p = sub.add_parser("evaluate", help="roll out a trained checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--episodes", type=int, default=None,
                   help="rollouts per task (default: the training setting)")
    p.add_argument("--tasks", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--export-traces", action="store_true")
    p.add_argument("--out", default=None, help="metrics JSON path (default: stdout)")


def _add_gridsearch(sub):
    p = sub.add_parser("gridsearch", help="train over a cartesian sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--sweep", required=True,
                   help="file of `key = v1, v2, ...` lines")
    p.add_argument("--outdir", required=True)


def cmd_train(args):
    overrides = list(args.override)
    if args.seed is not None:
        overrides.append("seed=%d" % args.seed)
    cfg = config_mod.load_config(args.config, overrides)
    outdir = args.outdir or "runs/%s_s%d" % (cfg["env"], cfg["seed"])
    Trainer(cfg, outdir).train()
    print(outdir)
    return 0


def cmd_evaluate(args):
    agent, cfg = load_agent(args.checkpoint)
    episodes = args.episodes or cfg["max_rollouts_per_task"]
    rng = np.random.default_rng(args.seed)
    tracer = None
    if args.export_traces:
        trace_path = (args.out or "eval") + ".traces.jsonl"
        tracer = TraceWriter(trace_path)
    metrics = eval_mod(agent, cfg["env"], args.tasks, episodes, rng,
                       trace_writer=tracer, trace_tasks=args.tasks if tracer else 0)
    if tracer is not None:
        tracer.close()
        metrics["traces"] = tracer.path
    if args.out:
        write_json(args.out, metrics)
        print(args.out)
    else:
        import json
        json.dump({k: v for k, v in metrics.items() if k not in ("returns", "first_steps")},
                  sys.stdout, indent=1, sort_keys=True)
        print()
    return 0


def _parse_sweep(path):
    axes = []
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, vals = line.partition("=")
            key = key.strip()
            values = [v.strip() for v in vals.split(",") if v.strip()]
            axes.append((key, values))
    return axes


def cmd_gridsearch(args):
    axes = _parse_sweep(args.sweep)
    combos = list(itertools.product(*[[(k, v) for v in vs] for k, vs in axes]))
    print("gridsearch: %d runs" % len(combos))
    for i, combo in enumerate(combos):
        overrides = ["%s=%s" % (k, v) for k, v in combo]
        cfg = config_mod.load_config(args.config, overrides)
        name = "run%03d_%s" % (i, "_".join("%s-%s" % (k, v) for k, v in combo))
        outdir = os.path.join(args.outdir, name.replace("/", "-"))
        print("[%d/%d] %s" % (i + 1, len(combos), outdir), flush=True)
        Trainer(cfg, outdir).train()
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="hyperx")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_train(sub)
    _add_evaluate(sub)
    _add_gridsearch(sub)
    args = parser.parse_args(argv)
    return {"train": cmd_train, "evaluate": cmd_evaluate,
            "gridsearch": cmd_gridsearch}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
