"""Joining code tensors along legs and assembling tensor-network codes.

Everything here works on symplectic generators. Contracting legs of two
stabilizer-code tensors is a GF(2) linear condition (the Paulis on the
paired legs must agree), so the joined code is read off from the kernel of
a small constraint system instead of from dense 4^n tensors.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .pauli import PauliString, concat, delete_qubits
from .stabilizer import (
    StabilizerCode,
    Syndrome,
    logical_operator,
    make_pure_errors_commute,
    pure_error,
    syndrome,
)


class CompositionError(ValueError):
    """Illegal contraction: bad leg pairing or no distinguishable side."""


def distinguishable(code: StabilizerCode, legs: Sequence[int], max_legs: int = 8) -> bool:
    """True iff every Pauli pattern supported on ``legs`` has its own syndrome."""
    legs = list(legs)
    if not legs:
        raise ValueError("need at least one leg")
    if len(legs) > max_legs:
        raise ValueError(f"refusing to enumerate 4^{len(legs)} patterns")
    if len(set(legs)) != len(legs) or not all(0 <= q < code.n for q in legs):
        raise ValueError(f"bad leg set {legs} for an {code.n}-qubit code")
    seen = set()
    for pattern in range(4 ** len(legs)):
        x = z = 0
        for j, q in enumerate(legs):
            label = (pattern >> (2 * j)) & 3
            if label in (1, 2):
                x |= 1 << q
            if label in (2, 3):
                z |= 1 << q
        s = syndrome(code, PauliString(code.n, x, z)).bits
        if s in seen:
            return False
        seen.add(s)
    return True


@dataclass(frozen=True)
class _Generators:
    """A code without pure errors; the cheap intermediate of repeated joins."""

    n: int
    stabilizers: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]

    @property
    def k(self) -> int:
        return len(self.logical_x)

    @classmethod
    def of(cls, code: StabilizerCode) -> "_Generators":
        return cls(code.n, code.stabilizers, code.logical_x, code.logical_z)


def _check_pairs(na: int, nb: int, pairs: Sequence[tuple[int, int]]) -> tuple[list[int], list[int]]:
    legs_a = [int(a) for a, _ in pairs]
    legs_b = [int(b) for _, b in pairs]
    if len(set(legs_a)) != len(legs_a) or len(set(legs_b)) != len(legs_b):
        raise CompositionError(f"legs used twice in pairing {list(pairs)}")
    if not all(0 <= q < na for q in legs_a) or not all(0 <= q < nb for q in legs_b):
        raise CompositionError(f"pairing {list(pairs)} out of range for {na} and {nb} legs")
    return legs_a, legs_b


def _join(a: _Generators, b: _Generators, legs_a: list[int], legs_b: list[int]) -> _Generators:
    na = a.n
    ia = [(1 << q) for q in legs_a]
    ib = [(1 << (na + q)) for q in legs_b]

    def key(p: PauliString) -> int:
        # 2 bits per contracted pair: mismatch of the X and Z parts across the pair
        r = 0
        for j, (ma, mb) in enumerate(zip(ia, ib)):
            if bool(p.x & ma) != bool(p.x & mb):
                r |= 1 << (2 * j)
            if bool(p.z & ma) != bool(p.z & mb):
                r |= 1 << (2 * j + 1)
        return r

    ident_a = PauliString.identity(na)
    ident_b = PauliString.identity(b.n)
    lift_a = [concat(p, ident_b) for p in a.stabilizers]
    lift_b = [concat(ident_a, p) for p in b.stabilizers]

    basis: dict[int, tuple[int, PauliString]] = {}

    def reduce(p: PauliString) -> tuple[int, PauliString]:
        r = key(p)
        for col, (kr, kp) in basis.items():
            if (r >> col) & 1:
                r ^= kr
                p = p * kp
        return r, p

    kernel: list[PauliString] = []
    for p in lift_a + lift_b:
        r, p = reduce(p)
        if r == 0:
            kernel.append(p)
            continue
        col = (r & -r).bit_length() - 1
        for c, (kr, kp) in list(basis.items()):
            if (kr >> col) & 1:
                basis[c] = (kr ^ r, kp * p)
        basis[col] = (r, p)

    def solve(p: PauliString) -> PauliString:
        r, p = reduce(p)
        if r:
            raise CompositionError("logical operator cannot be matched across the contracted legs")
        return p

    lx = [solve(concat(p, ident_b)) for p in a.logical_x] + [solve(concat(ident_a, p)) for p in b.logical_x]
    lz = [solve(concat(p, ident_b)) for p in a.logical_z] + [solve(concat(ident_a, p)) for p in b.logical_z]

    drop = legs_a + [na + q for q in legs_b]
    n_new = na + b.n - 2 * len(legs_a)
    stabs = tuple(delete_qubits(p, drop) for p in kernel)
    out = _Generators(
        n_new,
        stabs,
        tuple(delete_qubits(p, drop) for p in lx),
        tuple(delete_qubits(p, drop) for p in lz),
    )
    if len(stabs) != n_new - out.k:
        raise CompositionError(
            f"joined code has {len(stabs)} stabilizers, expected {n_new - out.k}; "
            "the contracted legs are not distinguishable"
        )
    return out


def _row(p: PauliString) -> int:
    return p.x | (p.z << p.n)


def _from_row(v: int, n: int) -> PauliString:
    mask = (1 << n) - 1
    return PauliString(n, v & mask, v >> n)


def finalize(gens: _Generators, canonical: bool = True) -> StabilizerCode:
    """Canonicalize generators and derive paired, mutually commuting pure errors."""
    n, k = gens.n, gens.k
    stabs, lx, lz = list(gens.stabilizers), list(gens.logical_x), list(gens.logical_z)
    if canonical:
        rows, pivots = gf2.rref([_row(p) for p in stabs], 2 * n)
        if len(rows) != len(stabs):
            raise CompositionError("stabilizer generators are dependent")
        stabs = [_from_row(r, n) for r in rows]
        lx = [_from_row(gf2.reduce(_row(p), rows, pivots), n) for p in lx]
        lz = [_from_row(gf2.reduce(_row(p), rows, pivots), n) for p in lz]
    # E_i must anticommute with S_j iff i == j and commute with every logical
    constraints = [p.z | (p.x << n) for p in stabs + lx + lz]
    sols = gf2.right_inverse_columns(constraints, 2 * n)
    pure = [_from_row(v, n) for v in sols[: len(stabs)]]
    pure = make_pure_errors_commute(stabs, pure)
    return StabilizerCode(n, k, tuple(stabs), tuple(pure), tuple(lx), tuple(lz))


def contract_codes(
    a: StabilizerCode,
    b: StabilizerCode,
    pairs: Sequence[tuple[int, int]],
    canonical: bool = True,
) -> StabilizerCode:
    """Join two codes by contracting leg ``pairs[j][0]`` of ``a`` with ``pairs[j][1]`` of ``b``.

    Surviving qubits of ``a`` come first in their original order, followed by
    those of ``b``; logical qubits of ``a`` precede those of ``b``.
    """
    legs_a, legs_b = _check_pairs(a.n, b.n, pairs)
    if legs_a and not (distinguishable(a, legs_a) or distinguishable(b, legs_b)):
        raise CompositionError("neither code distinguishes all Pauli errors on its contracted legs")
    return finalize(_join(_Generators.of(a), _Generators.of(b), legs_a, legs_b), canonical)


@dataclass(frozen=True)
class CodeTensor:
    code: StabilizerCode
    name: str = "steane"
    layer: int = 0

    @property
    def n(self) -> int:
        return self.code.n


Leg = tuple  # (node index, leg index)


@dataclass(frozen=True)
class TensorNetworkCode:
    """A graph of code tensors plus the stabilizer code it defines on its free legs.

    ``boundary[i]`` is the (node, leg) pair carrying physical qubit ``i``.
    Logical qubits are numbered node by node in insertion order.
    """

    nodes: tuple[CodeTensor, ...] = ()
    edges: tuple[tuple[Leg, Leg], ...] = ()
    boundary: tuple[Leg, ...] = ()
    qubit_map: tuple[tuple[int, ...], ...] = ()
    _gens: _Generators | None = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.boundary)

    @property
    def k(self) -> int:
        return sum(len(q) for q in self.qubit_map)

    @functools.cached_property
    def flat(self) -> StabilizerCode:
        if self._gens is None:
            raise ValueError("empty network has no code")
        if len(self.nodes) == 1:
            return self.nodes[0].code  # nothing was joined; keep the given generators
        return finalize(self._gens)

    @functools.cached_property
    def leg_table(self) -> list[list[tuple[str, int]]]:
        """Per node and leg: ("qubit", i) for boundary legs, ("edge", e) for contracted ones."""
        table = [[None] * t.n for t in self.nodes]
        for i, (node, leg) in enumerate(self.boundary):
            table[node][leg] = ("qubit", i)
        for e, ((n1, l1), (n2, l2)) in enumerate(self.edges):
            table[n1][l1] = ("edge", e)
            table[n2][l2] = ("edge", e)
        return table

    def logical_node(self, q: int) -> int:
        for node, qs in enumerate(self.qubit_map):
            if q in qs:
                return node
        raise IndexError(f"no logical qubit {q} in a network with k={self.k}")


def add_node(
    net: TensorNetworkCode,
    t: CodeTensor,
    pairings: Sequence[tuple[Leg, int]] = (),
) -> TensorNetworkCode:
    """Attach ``t`` by contracting each boundary leg ``(node, leg)`` with a leg of ``t``.

    Surviving boundary legs keep their order; free legs of ``t`` are appended
    in leg order.
    """
    new_index = len(net.nodes)
    position = {leg: i for i, leg in enumerate(net.boundary)}
    flat_legs = []
    for existing, _ in pairings:
        existing = tuple(existing)
        if existing not in position:
            raise CompositionError(f"leg {existing} is not a free boundary leg")
        flat_legs.append(position[existing])
    new_legs = [int(q) for _, q in pairings]
    if not net.nodes and pairings:
        raise CompositionError("the first node cannot be paired with anything")
    legs_a, legs_b = _check_pairs(net.n, t.n, list(zip(flat_legs, new_legs)))
    if pairings and not distinguishable(t.code, new_legs):
        raise CompositionError(f"{t.name} tensor does not distinguish errors on legs {new_legs}")

    tile = _Generators.of(t.code)
    gens = tile if net._gens is None else _join(net._gens, tile, legs_a, legs_b)

    paired = set(legs_a)
    boundary = tuple(leg for i, leg in enumerate(net.boundary) if i not in paired)
    boundary += tuple((new_index, q) for q in range(t.n) if q not in set(legs_b))
    edges = net.edges + tuple(
        (tuple(net.boundary[fa]), (new_index, q)) for fa, q in zip(legs_a, legs_b)
    )
    k0 = net.k
    return TensorNetworkCode(
        nodes=net.nodes + (t,),
        edges=edges,
        boundary=boundary,
        qubit_map=net.qubit_map + (tuple(range(k0, k0 + t.code.k)),),
        _gens=gens,
    )


def build_network(
    tensors: Sequence[CodeTensor], edges: Sequence[tuple[Leg, Leg]]
) -> TensorNetworkCode:
    """Replay a node/edge list; every edge must join a node to an earlier one."""
    incoming: dict[int, list[tuple[Leg, int]]] = {i: [] for i in range(len(tensors))}
    for (n1, l1), (n2, l2) in edges:
        if n1 == n2:
            raise CompositionError("self-contractions are not supported")
        if n1 > n2:
            (n1, l1), (n2, l2) = (n2, l2), (n1, l1)
        incoming[n2].append(((n1, l1), l2))
    net = TensorNetworkCode()
    for i, t in enumerate(tensors):
        net = add_node(net, t, incoming[i])
    return net


def coset_sample(
    code: StabilizerCode,
    labels: Sequence[int],
    s: Syndrome,
    count: int,
    rng: np.random.Generator,
) -> list[PauliString]:
    """Uniform random elements of the coset E(s) S L."""
    shift = pure_error(code, s) * logical_operator(code, labels)
    out = []
    for _ in range(count):
        coeffs = rng.integers(0, 2, size=code.m)
        p = shift
        for c, g in zip(coeffs, code.stabilizers):
            if c:
                p = p * g
        out.append(p)
    return out
