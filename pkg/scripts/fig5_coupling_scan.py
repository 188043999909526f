"""Joint steady state vs the analytic rate model on the fig5 preset, for several couplings.

Prints the worst and median relative deviation of the mechanical occupation
per coupling ``g_1``, plus the truncation flags raised by the joint solve.

    python scripts/fig5_coupling_scan.py --g 1e-9 5e-10 2.5e-10 --workers 4
"""
import argparse

import numpy as np

from optocool.config import build_config
from optocool.presets import preset_configs
from optocool.sweep import run_sweep


def scan(g_1, points, workers, truncation=None):
    results = []
    for raw in preset_configs("fig5", points=points):
        raw["system"]["mechanical"]["1"]["coupling"] = g_1
        raw["solver"]["workers"] = workers
        if truncation:
            raw["system"]["optical"]["truncation"], raw["system"]["mechanical"]["1"]["truncation"] = truncation
        results.append(run_sweep(build_config(raw)))
    analytic, joint = results
    rel = np.abs(joint.column("n1_ss") / analytic.column("n1_ss") - 1)
    flags = sorted({f for p in joint.points for f in p.flags})
    return rel, flags, joint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g", type=float, nargs="+", default=[1e-9, 5e-10, 2.5e-10])
    ap.add_argument("--points", type=int, default=40)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--truncation", type=int, nargs=2, metavar=("NA", "NM"))
    args = ap.parse_args()
    print(f"{'g_1':>10s} {'max rel':>10s} {'median rel':>11s} {'max resid':>10s}  flags")
    for g in args.g:
        rel, flags, joint = scan(g, args.points, args.workers, args.truncation)
        resid = max(p.residual for p in joint.points)
        print(f"{g:10.3g} {rel.max():10.3e} {np.median(rel):11.3e} {resid:10.2e}  {','.join(flags) or '-'}")


if __name__ == "__main__":
    main()
