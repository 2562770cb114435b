"""Stabilizer codes given by explicit generators, pure errors and logicals.

Also holds the brute-force oracles (distance, coset sums) that the fast
paths are checked against. Oracles refuse oversized inputs instead of
approximating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .noise import NoiseModel
from .pauli import BITS_LABEL, PauliString, parse, symplectic

LogicalClass = tuple  # tuple[int, ...], one label in {0,1,2,3} per logical qubit


class OracleSizeError(ValueError):
    """Raised when an exhaustive oracle is asked to enumerate too much."""


@dataclass(frozen=True)
class Syndrome:
    """Measurement outcomes; bit ``i`` set means stabilizer ``i`` returned -1."""

    bits: int
    length: int

    def __post_init__(self):
        if self.bits >> self.length:
            raise ValueError("syndrome bits beyond its length")

    @classmethod
    def from_list(cls, values: Iterable[int]) -> "Syndrome":
        values = list(values)
        bits = 0
        for i, v in enumerate(values):
            if v not in (0, 1):
                raise ValueError(f"syndrome entries must be 0/1, got {v}")
            bits |= v << i
        return cls(bits, len(values))

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __str__(self) -> str:
        return "".join(map(str, self.to_list()))


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    stabilizers: tuple[PauliString, ...]
    pure_errors: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]

    def __post_init__(self):
        for name in ("stabilizers", "pure_errors", "logical_x", "logical_z"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        m = self.n - self.k
        if len(self.stabilizers) != m or len(self.pure_errors) != m:
            raise ValueError(f"need {m} stabilizers and pure errors for [[{self.n},{self.k}]]")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError(f"need {self.k} logical X and Z operators")
        for p in self.stabilizers + self.pure_errors + self.logical_x + self.logical_z:
            if p.n != self.n:
                raise ValueError(f"operator on {p.n} qubits in an {self.n}-qubit code")

    @property
    def m(self) -> int:
        return self.n - self.k

    @classmethod
    def from_strings(cls, stabilizers, pure_errors, logical_x, logical_z) -> "StabilizerCode":
        stabs = [parse(s) for s in stabilizers]
        n = stabs[0].n if stabs else parse(logical_x[0]).n
        return cls(
            n=n,
            k=len(logical_x),
            stabilizers=stabs,
            pure_errors=[parse(s) for s in pure_errors],
            logical_x=[parse(s) for s in logical_x],
            logical_z=[parse(s) for s in logical_z],
        )


def _swap_xz(text: str) -> str:
    return text.translate(str.maketrans("XZ", "ZX"))


_STEANE_S = ("XXIXXII", "IXXXIIX", "XIXXIXI")
_STEANE_E = ("IIZZIII", "ZIIZIII", "IZIZIII")


def steane() -> StabilizerCode:
    """The [[7,1,3]] Steane code with the textbook generator table.

    Generators 4-6 are copies of 1-3 with X and Z swapped. The X-type pure
    errors obtained the same way anticommute with some Z-type ones, so they
    are multiplied by X-type stabilizers until all pure errors commute; the
    pairing with the generators is unchanged.
    """
    stabs = [parse(t) for t in list(_STEANE_S) + [_swap_xz(t) for t in _STEANE_S]]
    pure = [parse(t) for t in list(_STEANE_E) + [_swap_xz(t) for t in _STEANE_E]]
    return StabilizerCode(
        n=7,
        k=1,
        stabilizers=stabs,
        pure_errors=make_pure_errors_commute(stabs, pure),
        logical_x=[parse("XXXXXXX")],
        logical_z=[parse("ZZZZZZZ")],
    )


def make_pure_errors_commute(
    stabilizers: Sequence[PauliString], pure_errors: Sequence[PauliString]
) -> list[PauliString]:
    """Multiply pure errors by stabilizers so they mutually commute.

    Requires ``pure_errors[i]`` to anticommute with ``stabilizers[j]`` iff
    i == j; that pairing (and commutation with anything commuting with all
    stabilizers) is preserved.
    """
    out: list[PauliString] = []
    for i, e in enumerate(pure_errors):
        for j in range(i):
            if symplectic(e, out[j]):
                e = e * stabilizers[j]
        out.append(e)
    return out


def trivial_code(n: int = 1) -> StabilizerCode:
    """``n`` unencoded qubits, no stabilizers."""
    single = [PauliString(n, 1 << i, 0) for i in range(n)]
    return StabilizerCode(n, n, (), (), tuple(single), tuple(PauliString(n, 0, 1 << i) for i in range(n)))


def _symplectic_row(p: PauliString) -> int:
    return p.x | (p.z << p.n)


def validate(code: StabilizerCode) -> list[str]:
    """Check the commutation structure; returns human-readable violations."""
    bad: list[str] = []
    S, E, X, Z = code.stabilizers, code.pure_errors, code.logical_x, code.logical_z

    for i, j in itertools.combinations(range(len(S)), 2):
        if symplectic(S[i], S[j]):
            bad.append(f"stabilizers {i} and {j} anticommute")
    for i, j in itertools.combinations(range(len(E)), 2):
        if symplectic(E[i], E[j]):
            bad.append(f"pure errors {i} and {j} anticommute")
    for i in range(len(E)):
        for j in range(len(S)):
            if symplectic(E[i], S[j]) != (i == j):
                rel = "commutes" if i == j else "anticommutes"
                bad.append(f"pure error {i} {rel} with stabilizer {j}")
    for name, ops in (("X", X), ("Z", Z)):
        for a, L in enumerate(ops):
            for j, s in enumerate(S):
                if symplectic(L, s):
                    bad.append(f"logical {name}{a} anticommutes with stabilizer {j}")
    for a in range(code.k):
        for b in range(code.k):
            if symplectic(X[a], Z[b]) != (a == b):
                rel = "commutes" if a == b else "anticommutes"
                bad.append(f"logical X{a} {rel} with logical Z{b}")
            if a < b and symplectic(X[a], X[b]):
                bad.append(f"logical X{a} anticommutes with logical X{b}")
            if a < b and symplectic(Z[a], Z[b]):
                bad.append(f"logical Z{a} anticommutes with logical Z{b}")

    if gf2.rank([_symplectic_row(s) for s in S]) != len(S):
        bad.append("stabilizer generators are not independent")
    everything = [_symplectic_row(p) for p in S + E + X + Z]
    if gf2.rank(everything) != 2 * code.n:
        bad.append("stabilizers, pure errors and logicals do not generate the Pauli group")
    return bad


def syndrome(code: StabilizerCode, e: PauliString) -> Syndrome:
    if e.n != code.n:
        raise ValueError(f"error on {e.n} qubits for an {code.n}-qubit code")
    bits = 0
    for i, s in enumerate(code.stabilizers):
        if ((e.x & s.z) ^ (e.z & s.x)).bit_count() & 1:
            bits |= 1 << i
    return Syndrome(bits, code.m)


def pure_error(code: StabilizerCode, s: Syndrome) -> PauliString:
    if s.length != code.m:
        raise ValueError(f"syndrome of length {s.length}, code has {code.m} stabilizers")
    x = z = 0
    bits = s.bits
    while bits:
        low = bits & -bits
        p = code.pure_errors[low.bit_length() - 1]
        x ^= p.x
        z ^= p.z
        bits ^= low
    return PauliString(code.n, x, z)


def logical_class(code: StabilizerCode, p: PauliString) -> LogicalClass:
    """Logical label per qubit of an operator that commutes with all stabilizers."""
    if syndrome(code, p).bits:
        raise ValueError("operator has a nonzero syndrome; multiply out the pure error first")
    return tuple(
        BITS_LABEL[(symplectic(p, zop), symplectic(p, xop))]
        for xop, zop in zip(code.logical_x, code.logical_z)
    )


def logical_operator(code: StabilizerCode, labels: Sequence[int]) -> PauliString:
    """Representative of the logical class ``labels``."""
    if len(labels) != code.k:
        raise ValueError(f"need {code.k} labels, got {len(labels)}")
    x = z = 0
    for a, label in enumerate(labels):
        if label in (1, 2):
            x ^= code.logical_x[a].x
            z ^= code.logical_x[a].z
        if label in (2, 3):
            x ^= code.logical_z[a].x
            z ^= code.logical_z[a].z
    return PauliString(code.n, x, z)


def distance_bruteforce(code: StabilizerCode, max_n: int = 14) -> int:
    """Minimum weight of a nontrivial logical operator, by exhaustive search."""
    if code.n > max_n:
        raise OracleSizeError(f"refusing to enumerate Paulis on {code.n} > {max_n} qubits")
    if code.k == 0:
        raise ValueError("a code without logical qubits has no distance")
    for w in range(1, code.n + 1):
        for support in itertools.combinations(range(code.n), w):
            for labels in itertools.product((1, 2, 3), repeat=w):
                full = [0] * code.n
                for q, lab in zip(support, labels):
                    full[q] = lab
                p = PauliString.from_labels(full)
                if syndrome(code, p).bits:
                    continue
                if any(logical_class(code, p)):
                    return w
    raise AssertionError("no nontrivial logical found")


def _bit_matrix(ops: Sequence[PauliString], n: int) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([[(p.x >> q) & 1 for q in range(n)] for p in ops], dtype=np.uint8).reshape(len(ops), n)
    zs = np.array([[(p.z >> q) & 1 for q in range(n)] for p in ops], dtype=np.uint8).reshape(len(ops), n)
    return xs, zs


def chi_oracle(
    code: StabilizerCode,
    labels: Sequence[int],
    s: Syndrome,
    noise: NoiseModel,
    max_m: int = 26,
    chunk: int = 1 << 14,
) -> float:
    """Sum of prob(E(s) S L) over the whole stabilizer group, by enumeration."""
    if noise.n != code.n:
        raise ValueError("noise model size does not match the code")
    m = code.m
    if m > max_m:
        raise OracleSizeError(f"refusing to enumerate 2^{m} stabilizer elements")
    gx, gz = _bit_matrix(code.stabilizers, code.n)
    shift = pure_error(code, s) * logical_operator(code, labels)
    sx, sz = _bit_matrix([shift], code.n)
    rows = np.arange(code.n)
    total = 0.0
    for start in range(0, 2**m, chunk):
        idx = np.arange(start, min(start + chunk, 2**m))
        coeffs = ((idx[:, None] >> np.arange(m)) & 1).astype(np.int64)
        xs = ((coeffs @ gx) & 1) ^ sx
        zs = ((coeffs @ gz) & 1) ^ sz
        lab = np.where(zs, 3 - xs, xs)
        total += float(np.prod(noise.probs[rows, lab], axis=1).sum())
    return total
