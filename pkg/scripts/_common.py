"""Shared argument handling for the experiment scripts."""

import argparse
import sys
import time
from pathlib import Path

from pinchsem.config import ExperimentConfig
from pinchsem.harness import run_sweep

RESULTS = Path(__file__).resolve().parent.parent / "results"


def parse(description, default_trials=2000):
    ap = argparse.ArgumentParser(description=description)
    ap.add_argument("--trials", type=int, default=default_trials)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out-dir", type=Path, default=RESULTS)
    return ap.parse_args()


def run(name, args, **fields):
    cfg = ExperimentConfig(trials=args.trials, seed=args.seed, output=str(args.out_dir / f"{name}.csv"), **fields)
    t0 = time.perf_counter()
    records = run_sweep(cfg, progress=lambda var, v: print(f"  {name}: {var}={v} done", file=sys.stderr))
    print(f"{name}: {len(records)} rows -> {cfg.output} ({time.perf_counter() - t0:.0f} s)")
    for r in records:
        print(f"  {r.scheme:12s} {r.sweep_value!s:>12} se={r.mean_sem_se:.5f}+-{r.sem_se_stderr:.5f} "
              f"outage={r.outage:.3f}")
    return records
