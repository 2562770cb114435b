"""Run configurations shared by the CLI, the scripts and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .experiments import METHODS, point_seed


@dataclass(frozen=True)
class ScanConfig:
    """A grid of (radius, p) points sampled independently, each with its own seed."""

    radii: tuple[int, ...] = (1, 2, 3, 4)
    p_min: float = 0.06
    p_max: float = 0.13
    p_step: float = 0.005
    samples: int = 1000
    seed: int = 20201
    method: str = "coset"
    targets: tuple[int, ...] = (0,)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not 0 <= self.p_min <= self.p_max <= 1 or self.p_step <= 0:
            raise ValueError("need 0 <= p_min <= p_max <= 1 and p_step > 0")

    @property
    def grid(self) -> tuple[float, ...]:
        count = int(round((self.p_max - self.p_min) / self.p_step)) + 1
        return tuple(float(p) for p in np.round(self.p_min + self.p_step * np.arange(count), 6))

    def points(self) -> list[tuple[int, float, int]]:
        """(radius, p, seed) in radius-major order."""
        return [(r, p, point_seed(self.seed, r, p)) for r in self.radii for p in self.grid]


@dataclass(frozen=True)
class RunConfig:
    command: str
    net: str | None = None
    radius: tuple[int, ...] = ()
    p: tuple[float, ...] = ()
    samples: int = 1000
    seed: int | None = None
    qubits: str = "central"
    method: str = "counting"
    out: str | None = None
    max_radius_flat: int = 6

    SAMPLING = ("sample", "qfrac", "word")

    def __post_init__(self):
        if (self.net is None) == (not self.radius):
            raise ValueError("exactly one of a network file or --radius is required")
        if self.command in self.SAMPLING and self.seed is None:
            raise ValueError("sampling commands need --seed")
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if any(not 0 <= p <= 1 for p in self.p):
            raise ValueError("p must lie in [0, 1]")

    @classmethod
    def from_namespace(cls, args) -> "RunConfig":
        radius = args.radius if isinstance(args.radius, (list, tuple)) else (
            () if args.radius is None else (args.radius,))
        p = args.p if isinstance(args.p, (list, tuple)) else (args.p,)
        return cls(
            command=args.command,
            net=args.net,
            radius=tuple(radius),
            p=tuple(p),
            samples=getattr(args, "samples", 1000),
            seed=getattr(args, "seed", None),
            qubits=args.qubits,
            method=getattr(args, "method", "counting"),
            out=getattr(args, "out", None),
            max_radius_flat=args.max_radius_flat,
        )
