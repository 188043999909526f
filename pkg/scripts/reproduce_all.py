"""Run every preset and write CSV + JSON results, then print a short summary.

    python scripts/reproduce_all.py --out results --workers 4
"""
import argparse
import time

import numpy as np

from optocool.config import build_config
from optocool.presets import PRESETS, preset_configs
from optocool.sweep import emit, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--skip", nargs="*", default=(), choices=PRESETS)
    args = ap.parse_args()
    for name in PRESETS:
        if name in args.skip:
            continue
        for raw in preset_configs(name, points=args.points):
            raw["solver"]["workers"] = args.workers
            cfg = build_config(raw)
            t0 = time.perf_counter()
            res = run_sweep(cfg)
            paths = emit(res, cfg, args.out)
            n1 = res.column("n1_ss")
            finite = n1[np.isfinite(n1)]
            span = f"n1 {finite.max():.3g} -> {finite.min():.3g}" if finite.size else "n1 undefined (unstable)"
            print(f"{name:8s} {res.method:20s} {span:32s} failed {res.n_failed:2d}  "
                  f"{time.perf_counter() - t0:6.1f} s  {paths[0].name}")


if __name__ == "__main__":
    main()
