"""Energy minimization over probability measures on a discretized set.

Assembles the pairwise energy matrix of a gauge on a point cloud and
minimizes the quadratic form over the simplex with Frank-Wolfe (away-step
variant, exact line search on the quadratic).  The reciprocal of the
minimal energy is the capacity estimate; the minimizer is the discrete
equilibrium measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from addlevy.classify import numeric_convergence_probe
from addlevy.exponents import ExponentVector
from addlevy.kernels import Kernel, PotentialDensity, riesz_kernel
from addlevy.measures import AtomicMeasure, SetDiscretization, cell_width, discretize
from addlevy.quadrature import QuadratureSpec, halfline_edges, integrate_panels


class InconclusiveError(RuntimeError):
    """A numeric convergence probe could not classify the integral."""


@dataclass(frozen=True)
class EnergyMatrix:
    """Symmetric pairwise-energy matrix over the atoms of a discretization."""

    entries: np.ndarray
    source: str
    diagonal_policy: str  # "Regularized" or "Infinite"
    points: np.ndarray = None
    cell: float = 0.0

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("entries must be square")
        if not np.array_equal(e, e.T):
            raise ValueError("entries must be exactly symmetric")
        object.__setattr__(self, "entries", e)


@dataclass(frozen=True)
class EquilibriumResult:
    weights: np.ndarray
    energy: float
    capacity: float
    iterations: int
    fw_gap: float
    converged: bool
    energy_trace: tuple = ()

    def to_json(self):
        return {"weights": [float(w) for w in self.weights], "energy": self.energy,
                "capacity": self.capacity, "iterations": self.iterations,
                "fw_gap": self.fw_gap, "converged": self.converged}


def _cell_average(k: Kernel, h: float) -> float:
    """Average of the gauge over a cell of linear size h around the origin."""
    meta = k.meta.get("riesz")
    d = k.dim
    if meta is not None and d == 1:
        s = d - meta["alpha"]
        return (h / 2.0) ** (-s) / (1.0 - s)
    half = h / 2.0
    edges = halfline_edges(half, min_scale=1e-12)

    def radial(r):
        pts = np.zeros((r.size, d))
        pts[:, 0] = r
        return np.nan_to_num(k.eval(pts), posinf=0.0) * r ** (d - 1)

    integral = integrate_panels(radial, edges)
    return float(d * integral / half ** d)


def assemble_matrix(gauge: Union[Kernel, ExponentVector, PotentialDensity],
                    disc: SetDiscretization,
                    policy: str = "Regularized") -> EnergyMatrix:
    """Pairwise symmetrized gauge values at atom differences.

    The diagonal is either the cell-averaged gauge (Regularized) or left at
    the gauge's origin value (Infinite, typically +inf).
    """
    if isinstance(gauge, ExponentVector):
        gauge = PotentialDensity(gauge)
    if isinstance(gauge, PotentialDensity):
        gauge = gauge.as_kernel()
    mu = discretize(disc)
    h = cell_width(disc)
    diffs = mu.points[:, None, :] - mu.points[None, :, :]
    vals = 0.5 * (gauge.eval(diffs) + gauge.eval(-diffs))
    if policy == "Regularized":
        np.fill_diagonal(vals, _cell_average(gauge, h))
    elif policy != "Infinite":
        raise ValueError(f"unknown diagonal policy {policy!r}")
    vals = 0.5 * (vals + vals.T)  # enforce exact symmetry against roundoff
    return EnergyMatrix(entries=vals, source=gauge.meta.get("name", repr(gauge.meta)),
                        diagonal_policy=policy, points=mu.points, cell=h)


def solve_equilibrium(m: EnergyMatrix, tol: float = 1e-8,
                      max_iter: int = 50000) -> EquilibriumResult:
    """Minimize w' M w over the probability simplex by away-step Frank-Wolfe.

    Exact line search on the quadratic; stops when the Frank-Wolfe duality
    gap falls below ``tol`` relative to the current energy.  The energy is
    monotone nonincreasing across iterations.
    """
    mat = m.entries
    n = mat.shape[0]
    if not np.all(np.isfinite(mat)):
        # any probability vector puts weight on an infinite entry pair
        return EquilibriumResult(weights=np.full(n, 1.0 / n), energy=np.inf,
                                 capacity=0.0, iterations=0, fw_gap=0.0, converged=True)
    w = np.full(n, 1.0 / n)
    energy = float(w @ mat @ w)
    trace = [energy]
    rel_gap = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        grad = 2.0 * (mat @ w)
        i_fw = int(np.argmin(grad))
        fw_gap = float(grad @ w - grad[i_fw])
        rel_gap = fw_gap / max(abs(energy), 1e-300)
        if rel_gap < tol:
            return EquilibriumResult(weights=w, energy=energy, capacity=1.0 / energy,
                                     iterations=it - 1, fw_gap=rel_gap,
                                     converged=True, energy_trace=tuple(trace))
        active = np.flatnonzero(w > 0.0)
        i_aw = int(active[np.argmax(grad[active])])
        away_gap = float(grad[i_aw] - grad @ w)
        if fw_gap >= away_gap:
            direction = -w.copy()
            direction[i_fw] += 1.0
            gamma_max = 1.0
        else:
            direction = w.copy()
            direction[i_aw] -= 1.0
            denom = 1.0 - w[i_aw]
            gamma_max = w[i_aw] / denom if denom > 0.0 else 0.0
        slope = float(grad @ direction)
        curv = float(direction @ mat @ direction)
        if curv > 0.0:
            gamma = min(max(-slope / (2.0 * curv), 0.0), gamma_max)
        else:
            gamma = gamma_max if slope < 0.0 else 0.0
        if gamma == 0.0:
            # blocked away step; fall back to the plain FW direction
            direction = -w.copy()
            direction[i_fw] += 1.0
            slope = float(grad @ direction)
            curv = float(direction @ mat @ direction)
            gamma = min(max(-slope / (2.0 * curv), 0.0), 1.0) if curv > 0.0 else 0.0
            if gamma == 0.0:
                break
        w = w + gamma * direction
        w = np.maximum(w, 0.0)
        w /= w.sum()
        energy = float(w @ mat @ w)
        trace.append(energy)
    return EquilibriumResult(weights=w, energy=energy, capacity=1.0 / energy,
                             iterations=it, fw_gap=rel_gap, converged=False,
                             energy_trace=tuple(trace))


def bessel_riesz_capacity(disc: SetDiscretization, s: float, tol: float = 1e-8,
                          max_iter: int = 50000) -> EquilibriumResult:
    """Capacity with gauge ||x-y||^-s: assemble the Riesz matrix and solve."""
    mu = discretize(disc)
    d = mu.dim
    if not 0.0 < s < d:
        raise ValueError(f"s must lie in (0, {d}), got {s}")
    mat = assemble_matrix(riesz_kernel(d, d - s), disc, policy="Regularized")
    return solve_equilibrium(mat, tol=tol, max_iter=max_iter)


def point_capacity_test(psi: ExponentVector,
                        quad: Optional[QuadratureSpec] = None) -> bool:
    """True iff the additive field hits points: the product kernel is integrable.

    The only probability measure on a singleton is the point mass, whose
    energy is the full integral of the kernel; positivity of the singleton
    capacity is exactly its finiteness.  Stable-type families are decided by
    the analytic tail rule; otherwise a numeric convergence probe runs and
    an unclassifiable probe raises InconclusiveError.
    """
    decay = psi.kernel_decay_exponent()
    d = psi.dim
    if decay is not None:
        return decay > d  # equality is the log-divergent boundary: not integrable
    if d > 4:
        raise InconclusiveError("no analytic tail rule and dimension too high to probe")
    verdict = numeric_convergence_probe(
        lambda pts: psi.kernel_values(pts), total_dim=d, quad=quad)
    if verdict.kind == "Convergent":
        return True
    if verdict.kind == "Divergent":
        return False
    raise InconclusiveError("numeric probe could not classify the kernel integral")
