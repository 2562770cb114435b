"""Peaked fraction Q(p), its product bound and the word failure of the 8 innermost logical qubits.

    python3 scripts/qfrac_word.py --radii 2,3 --p 0.03,0.05,0.08 --samples 1000 --out q.csv
"""

import argparse

from tncode.experiments import estimate_Q, point_seed, word_failure, write_results
from tncode.holographic import build_code


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radii", default="2,3")
    ap.add_argument("--p", default="0.03,0.05,0.08")
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=11)
    ap.add_argument("--method", choices=("counting", "coset"), default="coset", help="word failure estimator")
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    targets = list(range(8))
    results = []
    print("radius n p Q +- bound word_fail +-")
    for r in (int(v) for v in args.radii.split(",")):
        net, _ = build_code(r)
        for p in (float(v) for v in args.p.split(",")):
            seed = point_seed(args.seed, r, p)
            q = estimate_Q(net, targets, p, args.samples, seed)
            w = word_failure(net, targets, p, args.samples, seed, args.method)
            results += [q, w]
            print(f"{r} {net.n} {p:g} {q.q_frac:.4f} {q.stderr:.4f} {q.bound:.4f} {w.p_fail:.4f} {w.stderr:.4f}",
                  flush=True)
    if args.out:
        write_results(results, args.out)


if __name__ == "__main__":
    main()
