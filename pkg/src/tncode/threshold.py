"""Finite-size scaling collapse, threshold fit and rate formulas.

The failure rate near threshold is modelled as p_fail = f(x) with
x = (p - p_th) n^(1/nu) and f a low-degree polynomial. f is fitted to the
reference (largest) code only; (p_th, nu) are chosen so that the other codes
fall on the same curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

RATE_ZERO = 1 / math.sqrt(21)
GROWTH = 4.8
DISTANCE_EXPONENT = 0.54


class InsufficientData(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


def distance_estimate(n: float) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    return float(n) ** DISTANCE_EXPONENT


def code_rate(ell: float, r0: float = RATE_ZERO, growth: float = GROWTH) -> float:
    """Rate of a logical qubit ``ell`` layers in from the centre."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    return r0 / growth**ell


def concatenated_rate(D: int) -> float:
    if D < 0:
        raise ValueError("D must be nonnegative")
    return 1.0 / 7**D


@dataclass(frozen=True)
class Point:
    radius: int
    n: int
    p: float
    p_fail: float
    stderr: float
    samples: int = 0

    @property
    def sigma(self) -> float:
        """stderr floored at 1/(2N) so that 0 and 1 estimates keep a finite weight."""
        floor = 1 / (2 * self.samples) if self.samples else 0.0
        return max(self.stderr, floor)


def as_points(records: Sequence[Any]) -> list[Point]:
    out = []
    for r in records:
        get = r.get if isinstance(r, Mapping) else lambda k, d=None, r=r: getattr(r, k, d)
        out.append(
            Point(int(get("radius")), int(get("n")), float(get("p")), float(get("p_fail")),
                  float(get("stderr")), int(get("samples", 0) or 0))
        )
    return out


def rescale(records: Sequence[Any], p_th: float, nu: float) -> list[dict]:
    """Records as dicts with an added ``x`` column."""
    if not nu > 0:
        raise ValueError("nu must be positive")
    out = []
    for pt in as_points(records):
        row = dict(pt.__dict__)
        row["x"] = (pt.p - p_th) * pt.n ** (1 / nu)
        out.append(row)
    return out


def _x(pts: Sequence[Point], p_th: float, nu: float) -> np.ndarray:
    p = np.array([q.p for q in pts])
    n = np.array([q.n for q in pts], dtype=float)
    return (p - p_th) * n ** (1 / nu)


def _curve(ref: Sequence[Point], p_th: float, nu: float, degree: int) -> np.ndarray:
    x = _x(ref, p_th, nu)
    y = np.array([q.p_fail for q in ref])
    w = 1 / np.array([q.sigma for q in ref])
    return np.polyfit(x, y, degree, w=w)


def collapse_residual(ref, rest, p_th: float, nu: float, degree: int = 2) -> float:
    """Weighted squared deviation of ``rest`` from the curve fitted to ``ref``."""
    if not nu > 0:
        return math.inf
    coeffs = _curve(ref, p_th, nu, degree)
    y = np.array([q.p_fail for q in rest])
    sig = np.array([q.sigma for q in rest])
    r = (np.polyval(coeffs, _x(rest, p_th, nu)) - y) / sig
    return float(r @ r)


def crossing_guess(points: Sequence[Point]) -> float:
    """p where the two largest codes' failure curves cross (linear interpolation)."""
    radii = sorted({q.radius for q in points})
    a = {q.p: q.p_fail for q in points if q.radius == radii[-2]}
    b = {q.p: q.p_fail for q in points if q.radius == radii[-1]}
    ps = sorted(set(a) & set(b))
    if not ps:
        return float(np.median([q.p for q in points]))
    d = np.array([b[p] - a[p] for p in ps])
    for i in range(len(ps) - 1):
        if d[i] == 0:
            return ps[i]
        if d[i] * d[i + 1] < 0:
            return ps[i] + (ps[i + 1] - ps[i]) * d[i] / (d[i] - d[i + 1])
    return ps[int(np.argmin(np.abs(d)))]


@dataclass
class ThresholdFit:
    p_th: float
    nu: float
    f_coeffs: np.ndarray  # highest degree first, as np.polyval expects
    residual: float
    reference_radius: int
    inputs: list[Point]
    history: list[float] = field(default_factory=list)  # best objective per iteration
    iterations: int = 0
    grad_norm: float = math.nan
    sensitivity: tuple[float, float] = (math.nan, math.nan)  # shifts of p_th, nu raising the residual by 1

    def f(self, x):
        return np.polyval(self.f_coeffs, x)

    def rescaled(self) -> list[dict]:
        return rescale(self.inputs, self.p_th, self.nu)

    def report(self) -> dict:
        return {
            "p_th": self.p_th,
            "nu": self.nu,
            "f_coeffs": [float(c) for c in self.f_coeffs],
            "residual": self.residual,
            "reference_radius": self.reference_radius,
            "iterations": self.iterations,
            "grad_norm": self.grad_norm,
            "sensitivity": list(self.sensitivity),
        }


def fit_threshold(
    records: Sequence[Any],
    reference_radius: int | None = None,
    degree: int = 2,
    init: tuple[float, float] | None = None,
    max_iter: int = 4000,
    xatol: float = 1e-10,
    fatol: float = 1e-14,
) -> ThresholdFit:
    """Nelder-Mead over (p_th, nu) with the polynomial refitted at every step."""
    pts = as_points(records)
    radii = sorted({q.radius for q in pts})
    if len(radii) < 3:
        raise InsufficientData(f"need at least 3 code sizes, got {len(radii)}")
    if len({q.p for q in pts}) < 4:
        raise InsufficientData("need at least 4 distinct p values")
    if any(not q.sigma > 0 for q in pts):
        raise InsufficientData("every record needs a positive standard error or a sample count")
    ref_r = radii[-1] if reference_radius is None else reference_radius
    ref = [q for q in pts if q.radius == ref_r]
    rest = [q for q in pts if q.radius != ref_r]
    if len(ref) <= degree:
        raise InsufficientData(f"reference radius {ref_r} has {len(ref)} points, need more than {degree}")

    x0 = np.array(init if init is not None else (crossing_guess(pts), 3.0), dtype=float)

    def objective(v: np.ndarray) -> float:
        return collapse_residual(ref, rest, v[0], v[1], degree)

    history: list[float] = []
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        callback=lambda xk: history.append(objective(xk)),
        options={"maxiter": max_iter, "xatol": xatol, "fatol": fatol},
    )
    if not res.success:
        raise NoConvergence(f"threshold fit did not converge: {res.message}")
    p_th, nu = float(res.x[0]), float(res.x[1])
    h = np.array([1e-7, 1e-5])
    grad = [(objective(res.x + h[i] * np.eye(2)[i]) - objective(res.x - h[i] * np.eye(2)[i])) / (2 * h[i])
            for i in range(2)]
    sens = _sensitivity(objective, res.x, float(res.fun))
    return ThresholdFit(
        p_th=p_th,
        nu=nu,
        f_coeffs=_curve(ref, p_th, nu, degree),
        residual=float(res.fun),
        reference_radius=ref_r,
        inputs=pts,
        history=history,
        iterations=int(res.nit),
        grad_norm=float(np.hypot(*grad)),
        sensitivity=sens,
    )


def _sensitivity(objective, x: np.ndarray, best: float) -> tuple[float, float]:
    """sqrt(2 / curvature) per parameter: the shift that raises the weighted residual by 1."""
    out = []
    for i, h in enumerate((1e-4, 1e-2)):
        step = h * np.eye(2)[i]
        curv = (objective(x + step) - 2 * best + objective(x - step)) / h**2
        out.append(math.sqrt(2 / curv) if curv > 0 else math.inf)
    return out[0], out[1]
