"""Finitely supported probability measures and discretizers of compact sets.

An :class:`AtomicMeasure` stands in for a compactly supported probability
measure; discretizers turn simple set descriptions (cube grids, Cantor
products, point pairs, circles) into equal-weight atomic measures supported
inside the set.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from addlevy.exponents import DimensionMismatchError

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class AtomicMeasure:
    """Probability measure sum_k w_k * delta_{x_k}."""

    points: np.ndarray  # (n, d)
    weights: np.ndarray  # (n,)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).ravel()
        if pts.shape[0] != w.shape[0]:
            raise ValueError("points and weights must have equal length")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        if np.any(w < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {w.sum()!r}")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.points.shape[0]

    def fourier(self, xi) -> np.ndarray:
        """mu_hat(xi) = sum_k w_k exp(i xi . x_k), vectorized over xi."""
        arr = np.asarray(xi, dtype=float)
        if self.dim == 1 and (arr.ndim <= 1 or arr.shape[-1] != 1):
            arr = arr.reshape(arr.shape + (1,))
        if arr.ndim == 1 and arr.shape == (self.dim,):
            phases = arr @ self.points.T
            return complex(np.sum(self.weights * np.exp(1j * phases)))
        if arr.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"xi of dimension {arr.shape[-1]} against a measure in dimension {self.dim}"
            )
        lead = arr.shape[:-1]
        phases = arr.reshape(-1, self.dim) @ self.points.T  # (m, n)
        vals = np.exp(1j * phases) @ self.weights
        return vals.reshape(lead)

    def translated(self, shift) -> "AtomicMeasure":
        shift = np.atleast_1d(np.asarray(shift, dtype=float))
        return AtomicMeasure(self.points + shift, self.weights)

    def to_csv(self) -> str:
        """Columns x_1..x_d, w."""
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow([f"x_{i + 1}" for i in range(self.dim)] + ["w"])
        for p, w in zip(self.points, self.weights):
            writer.writerow([repr(v) for v in p] + [repr(w)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "AtomicMeasure":
        rows = list(csv.reader(io.StringIO(text)))
        data = np.array([[float(v) for v in row] for row in rows[1:]])
        return cls(points=data[:, :-1], weights=data[:, -1])


def delta(x) -> AtomicMeasure:
    """Point mass at x."""
    pt = np.atleast_1d(np.asarray(x, dtype=float))
    return AtomicMeasure(points=pt.reshape(1, -1), weights=np.array([1.0]))


@dataclass(frozen=True)
class SetDiscretization:
    """Description of a compact target set and how to discretize it.

    kind is one of "CubeGrid", "CantorProduct", "TwoPoint", "Circle"; the
    params dict carries the construction parameters (see the builders below).
    """

    kind: str
    params: dict

    def to_json(self):
        return {"kind": self.kind, "params": dict(self.params)}


def cube_grid(bounds, n_per_axis: int) -> SetDiscretization:
    """Axis-aligned box split into n_per_axis cells per axis, cell centers."""
    bounds = [tuple(float(v) for v in ab) for ab in np.atleast_2d(bounds)]
    return SetDiscretization("CubeGrid", {"bounds": bounds, "n_per_axis": int(n_per_axis)})


def cantor_product(ratio: float, level: int, d: int = 1) -> SetDiscretization:
    if not 0.0 < ratio < 0.5:
        raise ValueError(f"ratio must lie in (0, 1/2), got {ratio}")
    return SetDiscretization("CantorProduct", {"ratio": float(ratio), "level": int(level), "d": int(d)})


def two_point(separation: float, d: int = 1) -> SetDiscretization:
    return SetDiscretization("TwoPoint", {"separation": float(separation), "d": int(d)})


def circle(radius: float, n: int) -> SetDiscretization:
    return SetDiscretization("Circle", {"radius": float(radius), "n": int(n)})


def _cantor_intervals_1d(ratio: float, level: int) -> np.ndarray:
    """Midpoints of the level-`level` construction intervals on [0, 1]."""
    intervals = [(0.0, 1.0)]
    for _ in range(level):
        nxt = []
        for a, b in intervals:
            length = (b - a) * ratio
            nxt.append((a, a + length))
            nxt.append((b - length, b))
        intervals = nxt
    return np.array([(a + b) / 2.0 for a, b in intervals])


def discretize(spec: SetDiscretization) -> AtomicMeasure:
    """Deterministic equal-weight point cloud for the described set."""
    kind, p = spec.kind, spec.params
    if kind == "CubeGrid":
        n = int(p["n_per_axis"])
        if n < 1:
            raise ValueError("n_per_axis must be >= 1")
        axes = []
        for a, b in p["bounds"]:
            h = (b - a) / n
            axes.append(a + h * (np.arange(n) + 0.5))
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
    elif kind == "CantorProduct":
        ratio, level, d = p["ratio"], int(p["level"]), int(p["d"])
        if not 0.0 < ratio < 0.5:
            raise ValueError("ratio must lie in (0, 1/2)")
        axis = _cantor_intervals_1d(ratio, level)
        grids = np.meshgrid(*([axis] * d), indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=-1)
    elif kind == "TwoPoint":
        sep, d = p["separation"], int(p["d"])
        if sep <= 0.0:
            raise ValueError("separation must be positive")
        pts = np.zeros((2, d))
        pts[0, 0] = -sep / 2.0
        pts[1, 0] = sep / 2.0
    elif kind == "Circle":
        radius, n = p["radius"], int(p["n"])
        theta = 2.0 * np.pi * np.arange(n) / n
        pts = radius * np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    else:
        raise ValueError(f"unknown discretization kind: {kind!r}")
    n_pts = pts.shape[0]
    return AtomicMeasure(points=pts, weights=np.full(n_pts, 1.0 / n_pts))


def cell_width(spec: SetDiscretization) -> float:
    """Linear cell size of the discretization (used for diagonal averaging)."""
    kind, p = spec.kind, spec.params
    if kind == "CubeGrid":
        widths = [(b - a) / p["n_per_axis"] for a, b in p["bounds"]]
        return float(min(widths))
    if kind == "CantorProduct":
        return float(p["ratio"] ** p["level"])
    if kind == "TwoPoint":
        return float(p["separation"])
    if kind == "Circle":
        return float(2.0 * np.pi * p["radius"] / p["n"])
    raise ValueError(f"unknown discretization kind: {kind!r}")


def fourier_measure(mu: AtomicMeasure, xi) -> complex:
    """Fourier transform of mu at a single frequency xi."""
    return complex(np.asarray(mu.fourier(np.atleast_1d(np.asarray(xi, dtype=float)))).reshape(()))
