"""Readers for run directories: config echoes, CSV logs, JSONL traces."""

import csv
import json
import os


class RunSet:
    """Runs that belong on one figure: same environment, varying seeds."""

    def __init__(self, run_dirs):
        if not run_dirs:
            raise ValueError("empty run set")
        self.run_dirs = list(run_dirs)
        self.configs = [read_config(d) for d in self.run_dirs]
        envs = {c.get("env") for c in self.configs}
        if len(envs) != 1:
            raise ValueError("runs mix environments %s; one figure, one env" % sorted(envs))
        self.env = envs.pop()
        self.seeds = [c.get("seed") for c in self.configs]

    def logs(self):
        return [read_log(os.path.join(d, "log.csv")) for d in self.run_dirs]


def read_config(run_dir):
    cfg = {}
    with open(os.path.join(run_dir, "config.txt"), encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if "=" in line:
                key, _, val = line.partition("=")
                cfg[key.strip()] = _parse(val.strip())
    return cfg


def _parse(text):
    import ast
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def read_log(path):
    """CSV log as a dict of float columns."""
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError("empty log %s" % path)
    return {k: [float(r[k]) for r in rows] for k in rows[0]}


def read_traces(path):
    """Parse a JSONL trace; returns (records, n_skipped). Malformed lines are
    skipped and counted rather than fatal."""
    records, skipped = [], 0
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                records.append(rec)
            except json.JSONDecodeError:
                skipped += 1
    return records, skipped


def read_metrics(run_dir):
    with open(os.path.join(run_dir, "metrics.json"), encoding="utf-8") as fh:
        return json.load(fh)
