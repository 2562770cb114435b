"""Maximum-likelihood decoding of logical qubits from a syndrome.

All probabilities come from exact contractions (see :mod:`tncode.contraction`).
Qubits that are neither fixed nor targeted are summed over, so a marginal
costs one contraction with the target's class axis left open.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .composition import TensorNetworkCode
from .contraction import Contracted, Contractor
from .noise import NoiseModel
from .stabilizer import Syndrome, pure_error

MAX_JOINT = 10


class ZeroProbabilitySyndrome(ValueError):
    """The syndrome cannot occur under the given noise model."""


def contractor_for(net: TensorNetworkCode) -> Contractor:
    """The cached default contractor of ``net``."""
    c = net.__dict__.get("_contractor")
    if c is None:
        c = Contractor(net)
        net.__dict__["_contractor"] = c  # frozen dataclass; cache like cached_property does
    return c


def _check(net: TensorNetworkCode, s: Syndrome, noise: NoiseModel) -> np.ndarray:
    flat = net.flat
    if noise.n != flat.n:
        raise ValueError(f"noise model for {noise.n} qubits, code has {flat.n}")
    return pure_error(flat, s).labels()


def _check_targets(net: TensorNetworkCode, targets: Sequence[int]) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError("repeated target qubit")
    for t in targets:
        if not 0 <= t < net.k:
            raise IndexError(f"logical qubit {t} out of range for k={net.k}")
    return targets


def chi(
    net: TensorNetworkCode,
    assign: Mapping[int, int],
    s: Syndrome,
    noise: NoiseModel,
    contractor: Contractor | None = None,
) -> Contracted:
    """chi of the partial assignment (other logical qubits summed), as mantissa and log-scale."""
    e = _check(net, s, noise)
    for q, label in assign.items():
        if label not in (0, 1, 2, 3):
            raise ValueError(f"class label {label} for qubit {q}")
    return (contractor or contractor_for(net)).contract(e, noise, dict(assign))


@dataclass
class DecodeOutcome:
    """Per-target chi vectors (rows share ``log_scale[i]``), conditionals and decisions."""

    targets: tuple[int, ...]
    chi: np.ndarray  # (K, 4) mantissas
    log_scale: np.ndarray  # (K,)
    conditional: np.ndarray  # (K, 4)
    word: tuple[int, ...]
    peaked: tuple[bool, ...]
    ties: tuple[bool, ...]
    joint: np.ndarray | None = None  # conditional table of shape (4,)*K
    word_probability: float | None = None

    @property
    def threshold(self) -> float:
        K = len(self.targets)
        return K / (K + 1)

    @property
    def all_peaked(self) -> bool:
        return all(self.peaked)


def _conditional(mantissa: np.ndarray, log_scale: float) -> np.ndarray:
    total = float(mantissa.sum())
    if log_scale == -math.inf or total == 0.0:
        raise ZeroProbabilitySyndrome("syndrome has zero probability under this noise model")
    return mantissa / total


def _decide(cond: np.ndarray, threshold: float) -> tuple[int, bool, bool]:
    best = int(np.argmax(cond))  # first maximum: lowest class index wins ties
    tie = int(np.count_nonzero(cond == cond[best])) > 1
    return best, bool(cond[best] > threshold), tie


def _outcome(targets, chis: list[Contracted], K: int) -> DecodeOutcome:
    threshold = K / (K + 1)
    conds = [_conditional(c.mantissa, c.log_scale) for c in chis]
    decided = [_decide(c, threshold) for c in conds]
    return DecodeOutcome(
        targets=tuple(targets),
        chi=np.array([c.mantissa for c in chis]).reshape(len(chis), 4),
        log_scale=np.array([c.log_scale for c in chis]),
        conditional=np.array(conds).reshape(len(chis), 4),
        word=tuple(d[0] for d in decided),
        peaked=tuple(d[1] for d in decided),
        ties=tuple(d[2] for d in decided),
    )


def decode_marginal(
    net: TensorNetworkCode, qubit: int, s: Syndrome, noise: NoiseModel, contractor: Contractor | None = None
) -> DecodeOutcome:
    """chi_i(L_i, s) for one logical qubit; the peaked flag uses K = 1."""
    (qubit,) = _check_targets(net, [qubit])
    e = _check(net, s, noise)
    c = (contractor or contractor_for(net)).contract(e, noise, open_qubits=[qubit])
    return _outcome([qubit], [c], 1)


def workers_from_env(default: int = 1) -> int:
    value = os.environ.get("TNCODE_THREADS")
    if not value:
        return default
    n = int(value)
    if n < 1:
        raise ValueError("TNCODE_THREADS must be a positive integer")
    return n


def decode_parallel(
    net: TensorNetworkCode,
    targets: Sequence[int],
    s: Syndrome,
    noise: NoiseModel,
    workers: int | None = None,
    contractor: Contractor | None = None,
) -> DecodeOutcome:
    """Independent marginal decoding of each target; peaked means max > K/(K+1)."""
    targets = _check_targets(net, targets)
    if not targets:
        raise ValueError("no target qubits")
    e = _check(net, s, noise)
    c = contractor or contractor_for(net)
    workers = workers_from_env() if workers is None else workers

    def one(q: int) -> Contracted:
        return c.contract(e, noise, open_qubits=[q])

    if workers > 1 and len(targets) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(targets))) as pool:
            chis = list(pool.map(one, targets))
    else:
        chis = [one(q) for q in targets]
    return _outcome(targets, chis, len(targets))


def decode_joint(
    net: TensorNetworkCode,
    targets: Sequence[int],
    s: Syndrome,
    noise: NoiseModel,
    contractor: Contractor | None = None,
) -> DecodeOutcome:
    """Full 4^K table of prob(L_targets | s) and its argmax word."""
    targets = _check_targets(net, targets)
    K = len(targets)
    if not 1 <= K <= MAX_JOINT:
        raise ValueError(f"joint decoding supports 1..{MAX_JOINT} targets, got {K}")
    e = _check(net, s, noise)
    res = (contractor or contractor_for(net)).contract(e, noise, open_qubits=targets)
    table = _conditional(res.mantissa, res.log_scale)
    flat_best = int(np.argmax(table))  # C order: lexicographically lowest word on ties
    word = tuple(int(i) for i in np.unravel_index(flat_best, table.shape))

    threshold = K / (K + 1)
    chis, conds, peaked, ties = [], [], [], []
    for axis in range(K):
        others = tuple(a for a in range(K) if a != axis)
        chis.append(res.mantissa.sum(axis=others))
        cond = table.sum(axis=others)
        conds.append(cond)
        _, pk, _ = _decide(cond, threshold)
        peaked.append(pk)
        ties.append(bool(np.count_nonzero(cond == cond.max()) > 1))
    return DecodeOutcome(
        targets=targets,
        chi=np.array(chis),
        log_scale=np.full(K, res.log_scale),
        conditional=np.array(conds),
        word=word,
        peaked=tuple(peaked),
        ties=tuple(ties),
        joint=table,
        word_probability=float(table[word]),
    )


def word_probability(
    net: TensorNetworkCode,
    word: Mapping[int, int],
    s: Syndrome,
    noise: NoiseModel,
    contractor: Contractor | None = None,
) -> float:
    """prob(word | s) = chi(word, s) / prob(s), from two contractions."""
    if not word:
        raise ValueError("empty word")
    _check_targets(net, list(word))
    c = contractor or contractor_for(net)
    num = chi(net, word, s, noise, c)
    den = chi(net, {}, s, noise, c)
    if den.log_scale == -math.inf or den.mantissa == 0:
        raise ZeroProbabilitySyndrome("syndrome has zero probability under this noise model")
    if num.log_scale == -math.inf:
        return 0.0
    return float(num.mantissa / den.mantissa * math.exp(num.log_scale - den.log_scale))
