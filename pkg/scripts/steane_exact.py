"""Exact failure rate of the Steane code (all 4^7 errors) next to both Monte Carlo estimators.

    python3 scripts/steane_exact.py --p 0.05,0.1,0.2 --samples 10000
"""

import argparse

from tncode.composition import CodeTensor, build_network
from tncode.experiments import estimate, exact_failure_bruteforce, point_seed, write_results
from tncode.noise import depolarizing
from tncode.stabilizer import steane


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", default="0.05,0.1,0.2")
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=None, help="results CSV of the Monte Carlo estimates")
    args = ap.parse_args()

    code = steane()
    net = build_network([CodeTensor(code)], [])
    results = []
    print("p exact counting +- coset +-")
    for p in (float(v) for v in args.p.split(",")):
        exact = exact_failure_bruteforce(code, [0], depolarizing(p, 7))
        seed = point_seed(args.seed, 1, p)
        c = estimate(net, [0], p, args.samples, seed, "counting")
        w = estimate(net, [0], p, args.samples, seed, "coset")
        results += [c, w]
        print(f"{p:g} {exact:.6f} {c.p_fail:.6f} {c.stderr:.6f} {w.p_fail:.6f} {w.stderr:.6f}")
    if args.out:
        write_results(results, args.out)


if __name__ == "__main__":
    main()
