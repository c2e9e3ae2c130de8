"""CLI: plot curves|traces|success --in <dirs...> --out <file>."""

import argparse
import sys

from .curves import learning_curve
from .io import RunSet, read_config
from .success import success_bars
from .traces import trace_map


def main(argv=None):
    ap = argparse.ArgumentParser(prog="hyperx-plot")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curves", help="learning curves with 95% CI bands")
    c.add_argument("--in", dest="inputs", nargs="+", required=True,
                   help="run directories; group seeds of one arm with commas")
    c.add_argument("--out", required=True)
    c.add_argument("--metric", default="mean_ep_return")
    c.add_argument("--smooth", type=int, default=None)
    c.add_argument("--labels", nargs="*", default=None)

    t = sub.add_parser("traces", help="trajectory overlay on the env map")
    t.add_argument("--in", dest="inputs", nargs=1, required=True,
                   help="a rollout-trace .jsonl file")
    t.add_argument("--out", required=True)
    t.add_argument("--env", default=None, help="env id (default: infer from "
                   "the sibling config.txt)")
    t.add_argument("--shade-bonus", action="store_true")

    s = sub.add_parser("success", help="per-episode success-rate bars")
    s.add_argument("--in", dest="inputs", nargs="+", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--labels", nargs="*", default=None)

    args = ap.parse_args(argv)
    if args.command == "curves":
        sets = [RunSet(group.split(",")) for group in args.inputs]
        learning_curve(sets, args.metric, args.out, window=args.smooth,
                       labels=args.labels)
        print(args.out)
    elif args.command == "traces":
        env = args.env
        if env is None:
            import os
            env = read_config(os.path.dirname(args.inputs[0]) or ".").get("env")
        summary = trace_map(args.inputs[0], env, args.out,
                            shade_bonus=args.shade_bonus)
        if summary["skipped_lines"]:
            print("skipped %d malformed trace lines" % summary["skipped_lines"],
                  file=sys.stderr)
        print(args.out)
    else:
        sets = [RunSet(group.split(",")) for group in args.inputs]
        success_bars(sets, args.out, labels=args.labels)
        print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
