"""Command-line entry point: ``tncode <subcommand> ...``.

Exit codes: 0 ok, 2 usage, 3 validation failure, 4 resource limit,
5 fit did not converge. Logical qubits on the command line are 1-based.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import experiments as ex
from .composition import TensorNetworkCode
from .config import RunConfig
from .decoder import decode_joint, decode_parallel, word_probability
from .formats import load, network_to_dict, save_json
from .holographic import ResourceLimitError, build_code, census
from .noise import depolarizing
from .pauli import SYMBOLS, parse
from .stabilizer import StabilizerCode, Syndrome, syndrome, validate
from .threshold import InsufficientData, NoConvergence, fit_threshold

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_RESOURCE, EXIT_NO_CONVERGENCE = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def resolve_qubits(text: str, k: int) -> list[int]:
    """0-based targets from "central", "radius2" (the 8 innermost tiles) or a 1-based list."""
    if text == "central":
        targets = [0]
    elif text == "radius2":
        targets = list(range(min(8, k)))
    else:
        targets = [q - 1 for q in parse_ints(text)]
    for q in targets:
        if not 0 <= q < k:
            raise UsageError(f"logical qubit {q + 1} out of range 1..{k}")
    if not targets:
        raise UsageError("no target qubits")
    return targets


def _config(args) -> RunConfig:
    try:
        return RunConfig.from_namespace(args)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _networks(cfg: RunConfig) -> list[TensorNetworkCode]:
    if cfg.net:
        net = load(cfg.net)
        if not isinstance(net, TensorNetworkCode):
            raise UsageError(f"{cfg.net} is a code file, not a network")
        return [net]
    return [build_code(r, max_radius=cfg.max_radius_flat)[0] for r in cfg.radius]


def _add_source(p: argparse.ArgumentParser, many: bool = True) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--net", help="network JSON file")
    g.add_argument("--radius", type=parse_ints if many else int,
                   help="build the holographic code of this radius" + (" (comma list)" if many else ""))
    p.add_argument("--max-radius-flat", type=int, default=6, help="largest radius to flatten (default 6)")


def _add_sampling(p: argparse.ArgumentParser, default_qubits: str) -> None:
    _add_source(p)
    p.add_argument("--p", type=parse_floats, required=True, help="comma list of depolarizing rates")
    p.add_argument("--samples", "--samples-per-point", dest="samples", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--qubits", default=default_qubits, help='1-based comma list, "central" or "radius2"')
    p.add_argument("--out", help="results CSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tncode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build the holographic code network")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-radius-flat", type=int, default=6)

    p = sub.add_parser("validate", help="check a code or network file")
    p.add_argument("file")

    p = sub.add_parser("decode", help="decode one syndrome")
    _add_source(p, many=False)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--syndrome", help="0/1 string, one character per stabilizer generator")
    src.add_argument("--error", help="Pauli string whose syndrome is decoded")
    p.add_argument("--qubits", default="central")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--joint", action="store_true", help="also enumerate the 4^K joint table")

    p = sub.add_parser("sample", help="Monte Carlo failure rate per p")
    _add_sampling(p, "central")
    p.add_argument("--method", choices=ex.METHODS, default="counting")
    p.add_argument("--trials-out", help="per-trial CSV (single network and p only)")

    p = sub.add_parser("qfrac", help="fraction of syndromes with every target peaked")
    _add_sampling(p, "radius2")

    p = sub.add_parser("word", help="word failure rate of several targets")
    _add_sampling(p, "radius2")
    p.add_argument("--method", choices=ex.METHODS, default="counting")

    p = sub.add_parser("fit", help="threshold fit from a results CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--reference-radius", type=int)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--max-iter", type=int, default=4000, help="optimizer iteration cap")
    p.add_argument("--out", help="JSON report with the rescaled table")
    return parser


def cmd_build(args) -> int:
    net, graph = build_code(args.radius, max_radius=args.max_radius_flat)
    c = census(args.radius)
    info = {"radius": c.radius, "tiles_per_layer": list(c.tiles_per_layer), "n": c.n, "k": c.k}
    save_json(network_to_dict(net, info), args.out)
    print(f"radius={args.radius} n={net.n} k={net.k} tiles={len(graph.tiles)} -> {args.out}")
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        obj = load(args.file)
    except (ValueError, KeyError) as exc:
        print(f"invalid: {exc}")
        return EXIT_VALIDATION
    code = obj.flat if isinstance(obj, TensorNetworkCode) else obj
    problems = validate(code)
    print(f"n={code.n} k={code.k} m={code.m}")
    for msg in problems:
        print(f"violation: {msg}")
    print("valid" if not problems else f"{len(problems)} violations")
    return EXIT_OK if not problems else EXIT_VALIDATION


def _syndrome(args, code: StabilizerCode) -> Syndrome:
    if args.error:
        err = parse(args.error)
        if err.n != code.n:
            raise UsageError(f"error on {err.n} qubits, code has {code.n}")
        return syndrome(code, err)
    text = args.syndrome.strip()
    if len(text) != code.m or set(text) - {"0", "1"}:
        raise UsageError(f"syndrome must be {code.m} characters of 0/1")
    return Syndrome.from_list(int(c) for c in text)


def cmd_decode(args) -> int:
    cfg = _config(args)
    (net,) = _networks(cfg)
    targets = resolve_qubits(cfg.qubits, net.k)
    s = _syndrome(args, net.flat)
    noise = depolarizing(args.p, net.n)
    out = decode_parallel(net, targets, s, noise)
    print(f"n={net.n} k={net.k} p={args.p} peaked threshold K/(K+1)={out.threshold:.6g}")
    print("qubit " + " ".join(f"{c:>12}" for c in SYMBOLS) + "  argmax peaked")
    for i, q in enumerate(targets):
        row = " ".join(f"{v:12.6e}" for v in out.conditional[i])
        print(f"{q + 1:5d} {row}  {SYMBOLS[out.word[i]]:>6} {str(out.peaked[i]):>6}")
    word = "".join(SYMBOLS[w] for w in out.word)
    prob = word_probability(net, dict(zip(targets, out.word)), s, noise)
    print(f"parallel word {word} prob(word|s)={prob:.6e} all_peaked={out.all_peaked}")
    if args.joint:
        j = decode_joint(net, targets, s, noise)
        jw = "".join(SYMBOLS[w] for w in j.word)
        print(f"joint word {jw} prob(word|s)={j.word_probability:.6e}")
    return EXIT_OK


def _sampling_loop(args, run) -> int:
    cfg = _config(args)
    nets = _networks(cfg)
    results = []
    for net in nets:
        targets = resolve_qubits(cfg.qubits, net.k)
        for p in cfg.p:
            r = run(net, targets, p, ex.point_seed(cfg.seed, ex.net_radius(net), p))
            results.append(r)
            extra = f" q_frac={r.q_frac:.4f} bound={r.bound:.4f}" if r.q_frac == r.q_frac else ""
            print(f"radius={r.radius} n={r.n} p={p:g} method={r.method} p_fail={r.p_fail:.6f} "
                  f"stderr={r.stderr:.6f}{extra}", flush=True)
    if cfg.out:
        ex.write_results(results, cfg.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.trials_out:
        cfg = _config(args)
        nets = _networks(cfg)
        if len(nets) != 1 or len(cfg.p) != 1:
            raise UsageError("--trials-out needs exactly one network and one p")
        net, p = nets[0], cfg.p[0]
        targets = resolve_qubits(cfg.qubits, net.k)
        seed = ex.point_seed(cfg.seed, ex.net_radius(net), p)
        records = ex.run_trials(net, targets, depolarizing(p, net.n), cfg.samples, seed,
                                with_weight=cfg.method == "coset")
        ex.write_trials(records, args.trials_out)
        reduce = ex.reduce_counting if args.method == "counting" else ex.reduce_coset
        fail, err = reduce(records)
        r = ex.make_result(net, targets, p, cfg.method, cfg.samples, seed, fail, err)
        print(f"radius={r.radius} n={r.n} p={p:g} method={r.method} p_fail={fail:.6f} stderr={err:.6f}")
        if cfg.out:
            ex.write_results([r], cfg.out)
        return EXIT_OK
    return _sampling_loop(args, lambda net, t, p, seed: ex.estimate(net, t, p, args.samples, seed, args.method))


def cmd_qfrac(args) -> int:
    return _sampling_loop(args, lambda net, t, p, seed: ex.estimate_Q(net, t, p, args.samples, seed))


def cmd_word(args) -> int:
    return _sampling_loop(args, lambda net, t, p, seed: ex.word_failure(net, t, p, args.samples, seed, args.method))


def cmd_fit(args) -> int:
    rows = ex.read_results(args.inp)
    fit = fit_threshold(rows, reference_radius=args.reference_radius, degree=args.degree, max_iter=args.max_iter)
    rep = fit.report()
    print(f"p_th={fit.p_th:.6f} nu={fit.nu:.4f} residual={fit.residual:.6g} reference_radius={fit.reference_radius}")
    print(f"residual +1 at p_th +- {fit.sensitivity[0]:.2g}, nu +- {fit.sensitivity[1]:.2g}")
    print("f_coeffs (highest degree first): " + " ".join(f"{c:.6g}" for c in fit.f_coeffs))
    print("# radius n p x p_fail stderr")
    for row in fit.rescaled():
        print(f"{row['radius']} {row['n']} {row['p']:.6g} {row['x']:.6g} {row['p_fail']:.6g} {row['stderr']:.6g}")
    if args.out:
        rep["rescaled"] = fit.rescaled()
        save_json(rep, args.out)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "validate": cmd_validate,
    "decode": cmd_decode,
    "sample": cmd_sample,
    "qfrac": cmd_qfrac,
    "word": cmd_word,
    "fit": cmd_fit,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InsufficientData, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
