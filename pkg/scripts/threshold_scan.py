"""Failure rate of the central logical qubit over a p grid for several radii, then the threshold fit.

    python3 scripts/threshold_scan.py --radii 1,2,3,4 --samples 1000 --out threshold.csv
"""

import argparse
import json
import time

from tncode.config import ScanConfig
from tncode.experiments import estimate, write_results
from tncode.holographic import build_code
from tncode.threshold import fit_threshold


def main():
    d = ScanConfig()
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", default=",".join(map(str, d.radii)))
    ap.add_argument("--pmin", type=float, default=d.p_min)
    ap.add_argument("--pmax", type=float, default=d.p_max)
    ap.add_argument("--step", type=float, default=d.p_step)
    ap.add_argument("--samples", type=int, default=d.samples)
    ap.add_argument("--seed", type=int, default=d.seed)
    ap.add_argument("--method", choices=("counting", "coset"), default=d.method)
    ap.add_argument("--out", default="threshold.csv")
    ap.add_argument("--report", default=None, help="JSON fit report")
    args = ap.parse_args()
    cfg = ScanConfig(tuple(int(v) for v in args.radii.split(",")), args.pmin, args.pmax, args.step,
                     args.samples, args.seed, args.method)

    results, nets = [], {}
    for r, p, seed in cfg.points():
        if r not in nets:
            if nets:
                write_results(results, args.out)
            nets[r] = build_code(r)[0]
        t0 = time.time()
        res = estimate(nets[r], list(cfg.targets), p, cfg.samples, seed, cfg.method)
        results.append(res)
        print(f"r={r} n={res.n} p={p:.3f} p_fail={res.p_fail:.5f} +- {res.stderr:.5f} ({time.time() - t0:.1f}s)",
              flush=True)
    write_results(results, args.out)
    fit = fit_threshold(results)
    print(f"p_th={fit.p_th:.5f} nu={fit.nu:.3f} residual={fit.residual:.4g} "
          f"(+1 at p_th +- {fit.sensitivity[0]:.2g}, nu +- {fit.sensitivity[1]:.2g})")
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(fit.report(), fh, indent=1)


if __name__ == "__main__":
    main()
