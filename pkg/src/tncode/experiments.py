"""Monte Carlo estimates of decoding failure, peakedness and word errors.

Every trial draws its own random stream from (seed, trial index), so records
do not depend on how trials are spread over worker processes. Estimates are
reducers over the list of :class:`TrialRecord`.
"""

from __future__ import annotations

import csv
import itertools
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .composition import TensorNetworkCode
from .decoder import contractor_for, decode_marginal, decode_parallel, word_probability, workers_from_env
from .noise import NoiseModel, depolarizing
from .pauli import PauliString, format_pauli
from .stabilizer import (
    StabilizerCode,
    Syndrome,
    chi_oracle,
    logical_class,
    pure_error,
    syndrome,
)
from .threshold import distance_estimate

METHODS = ("counting", "coset")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(trial,))))


def point_seed(seed: int, radius: int, p: float) -> int:
    """Seed for one (radius, p) point of a scan, so that points are sampled independently."""
    ss = np.random.SeedSequence([seed, radius, int(round(p * 1e9))])
    return int(ss.generate_state(1, dtype=np.uint32)[0])


def sample_error(noise: NoiseModel, rng: np.random.Generator) -> PauliString:
    """Independent draw of one Pauli per qubit from the noise model."""
    cum = np.cumsum(noise.probs, axis=1)
    u = rng.random(noise.n)
    labels = (u[:, None] >= cum[:, :3]).sum(axis=1)
    return PauliString.from_labels(labels)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    error: str
    syndrome: str
    true_word: tuple[int, ...]
    decoded_word: tuple[int, ...]
    success: bool
    qubit_success: tuple[bool, ...]
    peaked: tuple[bool, ...]
    weight: float  # prob(decoded word | s); nan when not computed


def run_trial(
    net: TensorNetworkCode,
    targets: Sequence[int],
    noise: NoiseModel,
    rng: np.random.Generator,
    trial: int = 0,
    with_weight: bool = True,
) -> TrialRecord:
    flat = net.flat
    err = sample_error(noise, rng)
    s = syndrome(flat, err)
    true = logical_class(flat, err * pure_error(flat, s))
    true_word = tuple(true[t] for t in targets)
    c = contractor_for(net)
    if len(targets) == 1:
        out = decode_marginal(net, targets[0], s, noise, contractor=c)
    else:
        out = decode_parallel(net, targets, s, noise, workers=1, contractor=c)
    word = out.word
    weight = math.nan
    if with_weight:
        if len(targets) == 1:
            weight = float(out.conditional[0, word[0]])
        else:
            weight = word_probability(net, dict(zip(targets, word)), s, noise, contractor=c)
    return TrialRecord(
        trial=trial,
        error=format_pauli(err),
        syndrome=str(s),
        true_word=true_word,
        decoded_word=word,
        success=word == true_word,
        qubit_success=tuple(a == b for a, b in zip(word, true_word)),
        peaked=out.peaked,
        weight=weight,
    )


# Worker processes inherit the network through fork instead of pickling it.
_WORKER_NET: TensorNetworkCode | None = None


def _run_block(args) -> list[TrialRecord]:
    targets, probs, seed, start, stop, with_weight = args
    noise = NoiseModel(probs)
    return [
        run_trial(_WORKER_NET, targets, noise, trial_rng(seed, t), t, with_weight) for t in range(start, stop)
    ]


def run_trials(
    net: TensorNetworkCode,
    targets: Sequence[int],
    noise: NoiseModel,
    samples: int,
    seed: int,
    with_weight: bool = True,
    workers: int | None = None,
) -> list[TrialRecord]:
    """Trials 0..samples-1 in order; identical for any worker count."""
    global _WORKER_NET
    targets = tuple(int(t) for t in targets)
    for t in targets:
        if not 0 <= t < net.k:
            raise IndexError(f"logical qubit {t} out of range for k={net.k}")
    if samples < 1:
        raise ValueError("need at least one sample")
    workers = workers_from_env() if workers is None else workers
    net.flat, contractor_for(net)  # build caches once, before forking
    if workers <= 1 or samples < 2:
        _WORKER_NET = net
        try:
            return _run_block((targets, noise.probs, seed, 0, samples, with_weight))
        finally:
            _WORKER_NET = None
    bounds = np.linspace(0, samples, min(workers, samples) + 1).astype(int)
    jobs = [(targets, noise.probs, seed, int(a), int(b), with_weight) for a, b in zip(bounds[:-1], bounds[1:])]
    _WORKER_NET = net
    try:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=len(jobs), mp_context=ctx) as pool:
            blocks = list(pool.map(_run_block, jobs))
    finally:
        _WORKER_NET = None
    return [r for block in blocks for r in block]


@dataclass(frozen=True)
class EstimateResult:
    radius: int
    n: int
    k: int
    targets: tuple[int, ...]
    p: float
    method: str
    samples: int
    seed: int
    p_fail: float
    stderr: float
    q_frac: float = math.nan
    bound: float = math.nan

    @property
    def d_est(self) -> float:
        return distance_estimate(self.n)


def net_radius(net: TensorNetworkCode) -> int:
    return max((t.layer for t in net.nodes), default=0)


def _binomial(successes: Iterable[bool]) -> tuple[float, float, int]:
    flags = np.fromiter(successes, dtype=bool)
    N = len(flags)
    rate = float(flags.mean())
    return rate, math.sqrt(rate * (1 - rate) / N), N


def reduce_counting(records: Sequence[TrialRecord]) -> tuple[float, float]:
    """Failure fraction and its binomial standard error."""
    fail, err, _ = _binomial(not r.success for r in records)
    return fail, err


def reduce_coset(records: Sequence[TrialRecord]) -> tuple[float, float]:
    """Mean of 1 - prob(decoded word | s) and its sample standard error."""
    values = np.array([1.0 - r.weight for r in records])
    if np.isnan(values).any():
        raise ValueError("records were produced without word weights")
    N = len(values)
    err = float(values.std(ddof=1) / math.sqrt(N)) if N > 1 else 0.0
    return float(values.mean()), err


def reduce_Q(records: Sequence[TrialRecord]) -> tuple[float, float, float]:
    """Fraction with every target peaked, its stderr, and the product bound.

    The bound multiplies max(0, p_i - K (1 - p_i)) over targets, with p_i the
    per-qubit marginal-decoding success rate; factors below zero only mean
    the bound is vacuous, so they are clipped.
    """
    q, err, _ = _binomial(all(r.peaked) for r in records)
    K = len(records[0].peaked)
    succ = np.array([r.qubit_success for r in records], dtype=float).mean(axis=0)
    bound = float(np.prod(np.clip(succ - K * (1 - succ), 0.0, None)))
    return q, err, bound


def make_result(net, targets, p, method, samples, seed, fail, err, q=math.nan, bound=math.nan) -> EstimateResult:
    return EstimateResult(
        radius=net_radius(net),
        n=net.n,
        k=net.k,
        targets=tuple(targets),
        p=float(p),
        method=method,
        samples=samples,
        seed=seed,
        p_fail=fail,
        stderr=err,
        q_frac=q,
        bound=bound,
    )


def estimate_failure_counting(net, targets, p, samples, seed, workers=None) -> EstimateResult:
    records = run_trials(net, targets, depolarizing(p, net.n), samples, seed, with_weight=False, workers=workers)
    return make_result(net, targets, p, "counting", samples, seed, *reduce_counting(records))


def estimate_failure_coset(net, targets, p, samples, seed, workers=None) -> EstimateResult:
    records = run_trials(net, targets, depolarizing(p, net.n), samples, seed, with_weight=True, workers=workers)
    return make_result(net, targets, p, "coset", samples, seed, *reduce_coset(records))


def estimate_Q(net, targets, p, samples, seed, workers=None) -> EstimateResult:
    records = run_trials(net, targets, depolarizing(p, net.n), samples, seed, with_weight=False, workers=workers)
    q, err, bound = reduce_Q(records)
    fail, _ = reduce_counting(records)
    return make_result(net, targets, p, "counting", samples, seed, fail, err, q, bound)


def word_failure(net, targets, p, samples, seed, method="counting", workers=None) -> EstimateResult:
    """Failure means at least one target decoded to the wrong class."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    records = run_trials(
        net, targets, depolarizing(p, net.n), samples, seed, with_weight=method == "coset", workers=workers
    )
    reduce = reduce_counting if method == "counting" else reduce_coset
    return make_result(net, targets, p, method, samples, seed, *reduce(records))


def estimate(net, targets, p, samples, seed, method="counting", workers=None) -> EstimateResult:
    if method == "counting":
        return estimate_failure_counting(net, targets, p, samples, seed, workers)
    if method == "coset":
        return estimate_failure_coset(net, targets, p, samples, seed, workers)
    raise ValueError(f"method must be one of {METHODS}")


def exact_failure_bruteforce(
    code: StabilizerCode, targets: Sequence[int], noise: NoiseModel, max_n: int = 10
) -> float:
    """Exact failure rate of marginal ML decoding, summing prob(E) over all 4^n errors.

    The decoder picks, per target, the class with the largest marginal of
    chi(L, s) (coset sums from the brute-force oracle); success requires all
    targets correct.
    """
    if code.n > max_n:
        raise ValueError(f"refusing to enumerate 4^{code.n} errors")
    targets = tuple(targets)
    decisions: dict[int, tuple[int, ...]] = {}
    for bits in range(2**code.m):
        s = Syndrome(bits, code.m)
        table = np.zeros((4,) * code.k)
        for L in itertools.product(range(4), repeat=code.k):
            table[L] = chi_oracle(code, L, s, noise)
        word = []
        for t in targets:
            marg = table.sum(axis=tuple(a for a in range(code.k) if a != t))
            word.append(int(np.argmax(marg)))
        decisions[bits] = tuple(word)
    rows = np.arange(code.n)
    fail = 0.0
    for labels in itertools.product(range(4), repeat=code.n):
        lab = np.array(labels)
        prob = float(np.prod(noise.probs[rows, lab]))
        if prob == 0.0:
            continue
        err = PauliString.from_labels(lab)
        s = syndrome(code, err)
        true = logical_class(code, err * pure_error(code, s))
        if tuple(true[t] for t in targets) != decisions[s.bits]:
            fail += prob
    return fail


RESULT_COLUMNS = (
    "radius", "n", "k", "targets", "p", "method", "samples", "seed", "p_fail", "stderr", "q_frac", "bound", "d_est",
)


def _fmt(v) -> str:
    if isinstance(v, tuple):
        return " ".join(str(x) for x in v)
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_results(results: Sequence[EstimateResult], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in results:
            row = asdict(r)
            row["d_est"] = r.d_est
            w.writerow([_fmt(row[c]) for c in RESULT_COLUMNS])


def read_results(path: str | Path) -> list[dict]:
    """Rows of a results CSV with numeric fields converted."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            conv = dict(row)
            for key in ("radius", "n", "k", "samples", "seed"):
                conv[key] = int(row[key])
            for key in ("p", "p_fail", "stderr", "q_frac", "bound", "d_est"):
                conv[key] = float(row[key]) if row.get(key) else math.nan
            conv["targets"] = tuple(int(x) for x in row["targets"].split())
            out.append(conv)
    return out


TRIAL_COLUMNS = tuple(f.name for f in fields(TrialRecord))


def write_trials(records: Sequence[TrialRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRIAL_COLUMNS)
        for r in records:
            w.writerow([_trial_field(v) for v in asdict(r).values()])


def _trial_field(v) -> str:
    if isinstance(v, tuple):
        return " ".join(str(int(x)) for x in v)
    if isinstance(v, bool):
        return str(int(v))
    return _fmt(v)
