"""Exact contraction of the maximum-likelihood tensor network of a code network.

Each node of a :class:`TensorNetworkCode` contributes its coset tensor
T(L) (stored sparsely as the list of Pauli strings in L*S); each physical
qubit contributes the 4-vector r -> q_i(e_i * r) built from the pure error.
Contracting everything yields chi(L, s). A node whose logical qubit is left
"open" keeps a class axis of size 4 in the result; a "summed" node uses
Q = sum_L T(L), which gives marginals over that qubit.

Contraction follows a plan: a sequence of (keep, absorb) cluster merges.
The default plan is a post-order over a spanning tree of the node graph
(each node hangs under its lowest-index neighbour, children in leg order),
which on the layered holographic code is leaf-to-root message passing over
contiguous arcs of children. Extra, non-tree edges are contracted as soon as
both ends sit in the same cluster. Every intermediate is rescaled to unit
max-norm with the logarithm of the scale carried alongside.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .composition import TensorNetworkCode
from .noise import NoiseModel
from .pauli import PRODUCT
from .stabilizer import StabilizerCode, logical_operator

OPEN = "open"
SUM = "sum"

MAX_COSET_GENERATORS = 12


def coset_table(code: StabilizerCode) -> np.ndarray:
    """Labels of every element of every logical coset, shape (4^k, 2^m, n).

    Classes are ordered like ``itertools.product(range(4), repeat=k)``.
    """
    if code.m > MAX_COSET_GENERATORS:
        raise ValueError(f"node code with {code.m} generators is too large to tabulate")
    m, n = code.m, code.n
    gx = np.array([[(s.x >> q) & 1 for q in range(n)] for s in code.stabilizers], dtype=np.int64).reshape(m, n)
    gz = np.array([[(s.z >> q) & 1 for q in range(n)] for s in code.stabilizers], dtype=np.int64).reshape(m, n)
    coeffs = (np.arange(2**m)[:, None] >> np.arange(m)) & 1
    sx, sz = (coeffs @ gx) & 1, (coeffs @ gz) & 1
    out = np.empty((4**code.k, 2**m, n), dtype=np.int64)
    for c, labels in enumerate(itertools.product(range(4), repeat=code.k)):
        L = logical_operator(code, labels)
        lx = np.array([(L.x >> q) & 1 for q in range(n)])
        lz = np.array([(L.z >> q) & 1 for q in range(n)])
        xs, zs = sx ^ lx, sz ^ lz
        out[c] = np.where(zs, 3 - xs, xs)
    return out


def tree_plan(net: TensorNetworkCode, reverse: bool = False, rotate: int = 0) -> list[tuple[int, int]]:
    """Post-order merges over the lowest-index-neighbour spanning tree.

    ``reverse`` flips the order in which each node absorbs its children and
    ``rotate`` cyclically shifts the root's child list; both leave the value
    of the contraction unchanged and exist to test exactly that.
    """
    nnodes = len(net.nodes)
    neighbours: list[dict[int, int]] = [dict() for _ in range(nnodes)]  # other node -> min own leg
    for (n1, l1), (n2, l2) in net.edges:
        neighbours[n1][n2] = min(neighbours[n1].get(n2, l1), l1)
        neighbours[n2][n1] = min(neighbours[n2].get(n1, l2), l2)
    children: list[list[tuple[int, int]]] = [[] for _ in range(nnodes)]
    for v in range(1, nnodes):
        lower = [u for u in neighbours[v] if u < v]
        if not lower:
            raise ValueError(f"node {v} is not connected to any earlier node")
        owner = min(lower)
        children[owner].append((neighbours[owner][v], v))
    order = [[v for _, v in sorted(ch)] for ch in children]
    if reverse:
        order = [list(reversed(ch)) for ch in order]
    if rotate and order[0]:
        r = rotate % len(order[0])
        order[0] = order[0][r:] + order[0][:r]

    steps: list[tuple[int, int]] = []
    stack: list[tuple[int, int]] = [(0, 0)]
    while stack:
        v, i = stack.pop()
        if i < len(order[v]):
            stack.append((v, i + 1))
            stack.append((order[v][i], 0))
        elif stack:
            steps.append((stack[-1][0], v))
    return steps


def greedy_plan(net: TensorNetworkCode) -> list[tuple[int, int]]:
    """Repeatedly merge the connected pair with the smallest result."""
    legs: dict[int, set] = {i: set() for i in range(len(net.nodes))}
    for e, ((n1, _), (n2, _)) in enumerate(net.edges):
        legs[n1].add(e)
        legs[n2].add(e)
    steps = []
    while len(legs) > 1:
        best = None
        keys = sorted(legs)
        for a, b in itertools.combinations(keys, 2):
            if not legs[a] & legs[b]:
                continue
            size = len(legs[a] ^ legs[b])
            if best is None or size < best[0]:
                best = (size, a, b)
        if best is None:
            raise ValueError("network is disconnected")
        _, a, b = best
        legs[a] = legs[a] ^ legs[b]
        del legs[b]
        steps.append((a, b))
    return steps


@dataclass
class Contracted:
    """Result tensor over the open logical qubits (axes in request order)."""

    mantissa: np.ndarray
    log_scale: float

    def value(self) -> np.ndarray:
        if self.log_scale == -math.inf:
            return np.zeros_like(self.mantissa)
        return self.mantissa * math.exp(self.log_scale)


class Contractor:
    """Caches coset tables and a plan for one network."""

    def __init__(self, net: TensorNetworkCode, plan: Sequence[tuple[int, int]] | None = None):
        self.net = net
        self.plan = list(tree_plan(net) if plan is None else plan)
        tables: dict[int, np.ndarray] = {}
        self.tables = []
        for t in net.nodes:
            key = id(t.code)
            if key not in tables:
                tables[key] = coset_table(t.code)
            self.tables.append(tables[key])
        self.node_k = [t.code.k for t in net.nodes]
        self.first_qubit = [qs[0] if qs else 0 for qs in net.qubit_map]
        # per node: boundary legs with qubit index, contracted legs with edge id
        self.boundary = []
        self.internal = []
        for legs in net.leg_table:
            self.boundary.append([(leg, ref) for leg, (kind, ref) in enumerate(legs) if kind == "qubit"])
            self.internal.append([(leg, ref) for leg, (kind, ref) in enumerate(legs) if kind == "edge"])

    def leg_weights(self, error_labels: np.ndarray, noise: NoiseModel) -> np.ndarray:
        """w[i, r] = prob of sigma^{e_i} sigma^r on physical qubit i."""
        n = len(error_labels)
        if noise.n != n:
            raise ValueError(f"noise model for {noise.n} qubits, network has {n}")
        return noise.probs[np.arange(n)[:, None], PRODUCT[error_labels]]

    def _node_tensor(self, v: int, w: np.ndarray, spec: Sequence):
        table = self.tables[v]  # (classes, elements, legs)
        vals = np.ones(table.shape[:2])
        for leg, q in self.boundary[v]:
            vals *= w[q][table[:, :, leg]]
        internal = self.internal[v]
        nint = len(internal)
        idx = np.zeros(table.shape[:2], dtype=np.int64)
        for leg, _ in internal:
            idx = idx * 4 + table[:, :, leg]
        ncls = table.shape[0]
        flat = idx + (np.arange(ncls) * 4**nint)[:, None]
        dense = np.bincount(flat.ravel(), weights=vals.ravel(), minlength=ncls * 4**nint)
        k = self.node_k[v]
        dense = dense.reshape((4,) * k + (4,) * nint)
        labels: list = []
        # resolve class axes: fixed label, summed, or kept open
        axis = 0
        for j in range(k):
            s = spec[j]
            if s == SUM:
                dense = dense.sum(axis=axis)
            elif s == OPEN:
                labels.append(("class", self.first_qubit[v] + j))
                axis += 1
            else:
                dense = np.take(dense, int(s), axis=axis)
        labels += [e for _, e in internal]
        return dense, labels

    def contract(
        self,
        error_labels: np.ndarray,
        noise: NoiseModel,
        assignment: dict[int, int] | None = None,
        open_qubits: Sequence[int] = (),
    ) -> Contracted:
        """Contract with fixed labels on ``assignment``, class axes on
        ``open_qubits`` (in that order) and Q tensors everywhere else."""
        assignment = dict(assignment or {})
        open_qubits = list(open_qubits)
        k = self.net.k
        for q in list(assignment) + open_qubits:
            if not 0 <= q < k:
                raise IndexError(f"logical qubit {q} out of range for k={k}")
        if set(assignment) & set(open_qubits) or len(set(open_qubits)) != len(open_qubits):
            raise ValueError("a logical qubit is both assigned and open, or open twice")
        w = self.leg_weights(np.asarray(error_labels), noise)

        tensors: dict[int, tuple[np.ndarray, list]] = {}
        log_scale = 0.0
        for v, qs in enumerate(self.net.qubit_map):
            spec = [OPEN if q in open_qubits else assignment.get(q, SUM) for q in qs]
            arr, labels = self._node_tensor(v, w, spec)
            arr, log_scale = _rescale(arr, log_scale)
            tensors[v] = (arr, labels)

        for a, b in self.plan:
            arr_a, lab_a = tensors[a]
            arr_b, lab_b = tensors.pop(b)
            common = [l for l in lab_a if l in lab_b]
            ia = [lab_a.index(l) for l in common]
            ib = [lab_b.index(l) for l in common]
            arr = np.tensordot(arr_a, arr_b, axes=(ia, ib))
            labels = [l for l in lab_a if l not in common] + [l for l in lab_b if l not in common]
            arr, log_scale = _rescale(arr, log_scale)
            tensors[a] = (arr, labels)

        if len(tensors) != 1:
            raise ValueError("plan does not contract the whole network")
        (arr, labels), = tensors.values()
        want = [("class", q) for q in open_qubits]
        if sorted(labels, key=str) != sorted(want, key=str):
            raise ValueError(f"left-over legs {labels}")
        arr = np.transpose(arr, [labels.index(l) for l in want]) if want else arr
        return Contracted(np.asarray(arr, dtype=float), log_scale)


def _rescale(arr: np.ndarray, log_scale: float) -> tuple[np.ndarray, float]:
    if log_scale == -math.inf:
        return arr, log_scale
    top = float(np.max(np.abs(arr))) if arr.size else 0.0
    if top == 0.0:
        return arr, -math.inf
    return arr / top, log_scale + math.log(top)
