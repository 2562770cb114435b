"""Independent single-qubit Pauli noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class NoiseModel:
    """Per-qubit probabilities over (I, X, Y, Z), shape ``(n, 4)``."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 2 or probs.shape[1] != 4:
            raise ValueError(f"expected an (n, 4) array, got shape {probs.shape}")
        if (probs < 0).any():
            raise ValueError("negative probability")
        if probs.size and np.abs(probs.sum(axis=1) - 1.0).max() > 1e-12:
            raise ValueError("per-qubit probabilities must sum to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return self.probs.shape[0]


def depolarizing(p: float, n: int) -> NoiseModel:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability {p} outside [0, 1]")
    row = np.array([1.0 - p, p / 3, p / 3, p / 3])
    return NoiseModel(np.tile(row, (n, 1)))
