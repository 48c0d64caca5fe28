#!/usr/bin/env python3
"""Run the ball-bound and corollary checks on every config in configs/ and print a summary table.

    python3 scripts/run_catalog.py [--samples N] [--threads T] [--out-dir DIR]
"""

import argparse
import os
import time

from interp_couples.cli import load_config
from interp_couples.report import emit
from interp_couples.taylor import is_homogeneous
from interp_couples.verify import corollary_check, sharpness_probe, theorem1_check

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--configs", default=os.path.join(ROOT, "configs"))
    ap.add_argument("--samples", type=int)
    ap.add_argument("--threads", type=int, default=4)
    ap.add_argument("--out-dir", help="write one JSON report per config and check")
    args = ap.parse_args()

    print(f"{'config':<14} {'check':<10} {'passed':>13} {'worst margin':>13} {'sharpness':>10} {'sec':>6}")
    for name in sorted(os.listdir(args.configs)):
        if not name.endswith(".json"):
            continue
        cfg = load_config(os.path.join(args.configs, name))
        if args.samples:
            cfg.n_samples = args.samples
        checks = [("theorem", theorem1_check)]
        if is_homogeneous(cfg.map.expr, cfg.N, cfg.map.degree, seed=cfg.seed):
            checks.append(("corollary", corollary_check))
        for label, fn in checks:
            t0 = time.perf_counter()
            rep = fn(cfg, threads=args.threads)
            dt = time.perf_counter() - t0
            s = rep.summary
            sharp = min(sharpness_probe(cfg, th) for th in cfg.thetas) if label == "theorem" else float("nan")
            print(f"{name[:-5]:<14} {label:<10} {s['passed']:>6}/{s['count']:<6} {s['worst_margin']:>13.4g} "
                  f"{sharp:>10.6f} {dt:>6.2f}")
            if args.out_dir:
                os.makedirs(args.out_dir, exist_ok=True)
                emit(rep, "json", os.path.join(args.out_dir, f"{name[:-5]}_{label}.json"))


if __name__ == "__main__":
    main()
