"""Phaseless n-qubit Pauli operators in the binary symplectic representation.

A Pauli string is stored as two Python integers ``x`` and ``z`` used as bit
sets: bit ``i`` of ``x`` (``z``) is the X (Z) component on qubit ``i``.
Phases are never tracked. Integer class labels follow the usual ordering
I=0, X=1, Y=2, Z=3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

SYMBOLS = "IXYZ"

# label -> (x, z)
LABEL_BITS = ((0, 0), (1, 0), (1, 1), (0, 1))
# (x, z) -> label
BITS_LABEL = {bits: label for label, bits in enumerate(LABEL_BITS)}

# Phaseless product table on labels: PRODUCT[a, b] is the label of sigma^a sigma^b.
PRODUCT = np.array(
    [
        [BITS_LABEL[(xa ^ xb, za ^ zb)] for (xb, zb) in LABEL_BITS]
        for (xa, za) in LABEL_BITS
    ],
    dtype=np.int64,
)


def _popcount_parity(v: int) -> int:
    return v.bit_count() & 1


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"qubit count must be non-negative, got {self.n}")
        if (self.x | self.z) >> self.n:
            raise ValueError("bits set beyond the qubit count")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "PauliString":
        if not isinstance(labels, np.ndarray):
            labels = list(labels)
        labels = np.asarray(labels, dtype=np.int64)
        if labels.size and (labels.min() < 0 or labels.max() > 3):
            raise ValueError("Pauli labels must lie in {0,1,2,3}")
        xbits = (labels == 1) | (labels == 2)
        zbits = (labels == 2) | (labels == 3)
        return cls(len(labels), _pack(xbits), _pack(zbits))

    def labels(self) -> np.ndarray:
        """Per-qubit labels in {0,1,2,3} as an int64 array."""
        xb = _unpack(self.x, self.n)
        zb = _unpack(self.z, self.n)
        # (0,0)->0, (1,0)->1, (1,1)->2, (0,1)->3
        return np.where(zb, 3 - xb, xb).astype(np.int64)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return BITS_LABEL[((self.x >> i) & 1, (self.z >> i) & 1)]

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def __repr__(self) -> str:
        return f"PauliString({format_pauli(self)!r})"

    @property
    def support(self) -> int:
        return self.x | self.z

    def is_identity(self) -> bool:
        return not (self.x or self.z)


def _pack(bits: np.ndarray) -> int:
    if len(bits) == 0:
        return 0
    return int.from_bytes(np.packbits(np.asarray(bits, dtype=bool), bitorder="little").tobytes(), "little")


def _unpack(v: int, n: int) -> np.ndarray:
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    raw = np.frombuffer(v.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n].astype(np.int64)


def _check_same_n(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n} qubits")


def multiply(a: PauliString, b: PauliString) -> PauliString:
    _check_same_n(a, b)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z)


def symplectic(a: PauliString, b: PauliString) -> int:
    """Symplectic inner product in GF(2); 1 iff ``a`` and ``b`` anticommute."""
    _check_same_n(a, b)
    return _popcount_parity((a.x & b.z) ^ (a.z & b.x))


def commutes(a: PauliString, b: PauliString) -> bool:
    return symplectic(a, b) == 0


def weight(p: PauliString) -> int:
    return p.support.bit_count()


def parse(text: str) -> PauliString:
    x = z = 0
    for i, ch in enumerate(text):
        try:
            label = SYMBOLS.index(ch)
        except ValueError:
            raise ValueError(f"illegal Pauli symbol {ch!r} at position {i}") from None
        xb, zb = LABEL_BITS[label]
        x |= xb << i
        z |= zb << i
    return PauliString(len(text), x, z)


def format_pauli(p: PauliString) -> str:
    return "".join(SYMBOLS[label] for label in p.labels())


def _check_legs(legs: Sequence[int], n: int) -> list[int]:
    legs = [int(i) for i in legs]
    if len(set(legs)) != len(legs):
        raise ValueError(f"duplicate indices in {legs}")
    for i in legs:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for {n} qubits")
    return legs


def restrict(p: PauliString, legs: Sequence[int]) -> PauliString:
    """Sub-operator of ``p`` on ``legs``, in the order given."""
    legs = _check_legs(legs, p.n)
    x = z = 0
    for j, i in enumerate(legs):
        x |= ((p.x >> i) & 1) << j
        z |= ((p.z >> i) & 1) << j
    return PauliString(len(legs), x, z)


def embed(p: PauliString, legs: Sequence[int], n: int) -> PauliString:
    """Place ``p`` on ``legs`` of an ``n``-qubit register, identity elsewhere."""
    legs = _check_legs(legs, n)
    if len(legs) != p.n:
        raise ValueError(f"{p.n}-qubit operator cannot be placed on {len(legs)} legs")
    x = z = 0
    for j, i in enumerate(legs):
        x |= ((p.x >> j) & 1) << i
        z |= ((p.z >> j) & 1) << i
    return PauliString(n, x, z)


def delete_qubits(p: PauliString, positions: Iterable[int]) -> PauliString:
    """Drop the given qubits and close up the gaps, keeping relative order."""
    x, z, n = p.x, p.z, p.n
    for i in sorted(set(positions), reverse=True):
        low = (1 << i) - 1
        x = (x & low) | ((x >> (i + 1)) << i)
        z = (z & low) | ((z >> (i + 1)) << i)
        n -= 1
    return PauliString(n, x, z)


def concat(a: PauliString, b: PauliString) -> PauliString:
    """Tensor product ``a ⊗ b`` with ``a`` on the low qubits."""
    return PauliString(a.n + b.n, a.x | (b.x << a.n), a.z | (b.z << a.n))


def product(paulis: Iterable[PauliString], n: int) -> PauliString:
    x = z = 0
    for p in paulis:
        if p.n != n:
            raise ValueError(f"length mismatch: {p.n} vs {n} qubits")
        x ^= p.x
        z ^= p.z
    return PauliString(n, x, z)
