"""Gauges: Riesz kernels, the Lambda sojourn kernel, one-potential densities.

A kernel is a nonnegative gauge on R^d, finite off the origin and possibly
infinite at 0, optionally carrying a closed-form Fourier transform.  The
symmetrized one-potential density v of an additive Levy process is computed
by radial Fourier inversion of the product kernel (v_hat = K), supported in
d = 1 and d = 3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from addlevy.exponents import ExponentVector
from addlevy.quadrature import (
    QuadratureError,
    QuadratureSpec,
    averaged_oscillatory_tail,
    halfline_edges,
    integrate_panels,
    powerlaw_tail,
)


@dataclass(frozen=True)
class Kernel:
    """Nonnegative gauge with optional known Fourier transform.

    eval maps arrays of shape (..., d) to nonnegative values (np.inf is
    allowed at the origin); fourier, when present, maps frequencies to the
    nonnegative transform values ("kernel of positive type").
    """

    eval: Callable[[np.ndarray], np.ndarray]
    dim: int
    fourier: Optional[Callable[[np.ndarray], np.ndarray]] = None
    meta: dict = field(default_factory=dict)

    def at(self, x) -> float:
        arr = np.atleast_1d(np.asarray(x, dtype=float)).reshape(-1, self.dim)
        return float(self.eval(arr)[0])


def _radius(x: np.ndarray, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if dim == 1 and (arr.ndim <= 1 or arr.shape[-1] != 1):
        arr = arr.reshape(arr.shape + (1,))
    return np.linalg.norm(arr, axis=-1)


def _sphere_area(d: int) -> float:
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@lru_cache(maxsize=None)
def riesz_constant(d: int, alpha: float) -> float:
    """Constant c with kappa_alpha_hat = c * ||xi||^-alpha, by calibration.

    Calibrated so the Riesz energy identity holds for the standard Gaussian
    reference measure: both the real-side double integral (reduced to a
    radial integral of the Gaussian difference law) and the Fourier-side
    integral are evaluated by quadrature and their ratio is the constant.
    """
    if not 0.0 < alpha < d:
        raise ValueError(f"alpha must lie in (0, {d}), got {alpha}")
    s_d = _sphere_area(d)
    # real side: E ||X - Y||^{alpha-d} with X, Y iid N(0, I_d), X-Y ~ N(0, 2 I_d)
    real_side = (s_d / (4.0 * math.pi) ** (d / 2.0)) * integrate.quad(
        lambda r: r ** (alpha - 1.0) * math.exp(-r * r / 4.0), 0.0, np.inf
    )[0]
    # Fourier side without the constant: (2 pi)^-d int e^{-||xi||^2} ||xi||^-alpha
    fourier_side = (s_d / (2.0 * math.pi) ** d) * integrate.quad(
        lambda r: r ** (d - alpha - 1.0) * math.exp(-r * r), 0.0, np.inf
    )[0]
    return real_side / fourier_side


def riesz_kernel(d: int, alpha: float) -> Kernel:
    """The Riesz kernel ||x||^(alpha-d) with transform c * ||xi||^-alpha."""
    if not 0.0 < alpha < d:
        raise ValueError(f"alpha must lie in (0, {d}), got {alpha}")
    c = riesz_constant(d, alpha)

    def ev(x):
        r = _radius(x, d)
        with np.errstate(divide="ignore"):
            return np.where(r > 0.0, r ** (alpha - d), np.inf)

    def four(xi):
        r = _radius(xi, d)
        with np.errstate(divide="ignore"):
            return np.where(r > 0.0, c * r ** (-alpha), np.inf)

    return Kernel(eval=ev, dim=d, fourier=four,
                  meta={"riesz": {"d": d, "alpha": alpha, "constant": c}})


def exponential_kernel(rate: float = 1.0) -> Kernel:
    """kappa(x) = exp(-rate |x|) in d=1; transform 2 rate / (rate^2 + xi^2)."""
    return Kernel(
        eval=lambda x: np.exp(-rate * _radius(x, 1)),
        dim=1,
        fourier=lambda xi: 2.0 * rate / (rate ** 2 + _radius(xi, 1) ** 2),
        meta={"name": f"exp({rate})"},
    )


def gaussian_kernel(width: float = 1.0) -> Kernel:
    """kappa(x) = exp(-x^2 / (2 w^2)) in d=1; transform w sqrt(2 pi) e^{-w^2 xi^2/2}."""
    return Kernel(
        eval=lambda x: np.exp(-_radius(x, 1) ** 2 / (2.0 * width ** 2)),
        dim=1,
        fourier=lambda xi: width * math.sqrt(2.0 * math.pi)
        * np.exp(-(width * _radius(xi, 1)) ** 2 / 2.0),
        meta={"name": f"gauss({width})"},
    )


def cauchy_kernel(scale: float = 1.0) -> Kernel:
    """kappa(x) = 1 / (1 + (x/s)^2) in d=1; transform pi s e^{-s |xi|}."""
    return Kernel(
        eval=lambda x: 1.0 / (1.0 + (_radius(x, 1) / scale) ** 2),
        dim=1,
        fourier=lambda xi: math.pi * scale * np.exp(-scale * _radius(xi, 1)),
        meta={"name": f"cauchy({scale})"},
    )


# ---------------------------------------------------------------------------
# the Lambda kernel
# ---------------------------------------------------------------------------

def lambda_closed(z: complex) -> float:
    """Closed form of the double-exponential sojourn kernel.

    Lambda(z) = 2 Re(1/(1+z)) + 2 ((1+Re z)^2 - (Im z)^2) / |1+z|^4,
    valid for Re z >= 0.
    """
    z = complex(z)
    if z.real < 0.0:
        raise ValueError(f"Re z must be >= 0, got {z!r}")
    w = 1.0 + z
    return 2.0 * (w.real / abs(w) ** 2) + 2.0 * ((1.0 + z.real) ** 2 - z.imag ** 2) / abs(w) ** 4


def lambda_bruteforce(z: complex, quad: Optional[QuadratureSpec] = None) -> float:
    """The defining double integral of the Lambda kernel, by 2D quadrature.

    Integrates exp(-|t| - |s| - |t-s| sigma(z; t-s)) over [-T, T]^2, where
    sigma is z for t >= s and conj(z) otherwise; the square is split along
    the diagonal so each piece is smooth.
    """
    z = complex(z)
    if z.real < 0.0:
        raise ValueError(f"Re z must be >= 0, got {z!r}")
    if quad is None:
        quad = QuadratureSpec(scheme="TimePlane2D", r_max=40.0, n_nodes=64, rel_tol=1e-9)
    bigt = min(quad.r_max, 45.0)

    def re_lower(s, t):  # s <= t, sigma = z
        u = t - s
        val = np.exp(-abs(t) - abs(s) - u * z)
        return val.real

    # By s <-> t symmetry the integral over {s >= t} (with conj(z)) equals
    # the one over {s <= t}, so only the lower triangle is computed.  It is
    # split along the coordinate axes so every piece is smooth.
    opts = {"epsabs": 1e-12, "epsrel": 1e-12}
    neg, _ = integrate.dblquad(re_lower, -bigt, 0.0, -bigt, lambda t: t, **opts)
    mixed, _ = integrate.dblquad(re_lower, 0.0, bigt, -bigt, 0.0, **opts)
    pos, _ = integrate.dblquad(re_lower, 0.0, bigt, 0.0, lambda t: t, **opts)
    tail_bound = 8.0 * math.exp(-bigt)
    value = 2.0 * (neg + mixed + pos)
    if tail_bound > quad.rel_tol * max(abs(value), 1e-12):
        raise QuadratureError(
            f"truncation tail {tail_bound:.3e} above tolerance at T={bigt}"
        )
    return value


# ---------------------------------------------------------------------------
# one-potential densities by radial Fourier inversion
# ---------------------------------------------------------------------------

def _check_isotropic_1d(psi: ExponentVector):
    if psi.dim not in (1, 3):
        raise ValueError("numeric inversion supports d in {1, 3} only")


def potential_density_v(psi: ExponentVector, x, quad: Optional[QuadratureSpec] = None) -> float:
    """Symmetrized one-potential density v(x) of the additive field.

    v is the inverse Fourier transform of the product kernel K:
    v(x) = (2 pi)^-d int cos(xi.x) K(xi) dxi (d=1) and its radial
    sine-transform analogue in d=3.  Returns np.inf at the origin when the
    analytic tail test certifies that K is not integrable.
    """
    _check_isotropic_1d(psi)
    if quad is None:
        quad = QuadratureSpec(r_max=400.0, n_nodes=2048, rel_tol=1e-8)
    d = psi.dim
    r = float(np.asarray(_radius(np.asarray(x, dtype=float), d)).reshape(()))
    decay = psi.kernel_decay_exponent()

    def kern(s):
        return psi.kernel_values(s.reshape(-1, 1) if d == 1 else _radial_points(s, d))

    if d == 1:
        if r == 0.0:
            if decay is None or decay <= 1.0:
                return np.inf
            edges = halfline_edges(quad.r_max)
            main = integrate_panels(kern, edges)
            tail = powerlaw_tail(float(kern(np.array([quad.r_max]))[0]), quad.r_max, decay)
            return (main + tail) / math.pi

        def f(s):
            return np.cos(s * r) * kern(s)

        edges = halfline_edges(quad.r_max, max_freq=r)
        main = integrate_panels(f, edges)
        tail = averaged_oscillatory_tail(f, quad.r_max, r, rel_tol=quad.rel_tol,
                                         scale=max(abs(main), 1.0))
        return (main + tail) / math.pi

    # d == 3, isotropic components only: v(r) = (2 pi^2 r)^-1 int xi sin(xi r) K dxi
    if r == 0.0:
        if decay is None or decay <= 3.0:
            return np.inf

        def f0(s):
            return s * s * kern(s)

        edges = halfline_edges(quad.r_max)
        main = integrate_panels(f0, edges)
        tail = powerlaw_tail(float(f0(np.array([quad.r_max]))[0]), quad.r_max, decay - 2.0)
        return (main + tail) / (2.0 * math.pi ** 2)

    def f3(s):
        return s * np.sin(s * r) * kern(s)

    if decay is None or decay <= 1.0:
        raise QuadratureError("sine-transform envelope does not decay; inversion unsupported")
    edges = halfline_edges(quad.r_max, max_freq=r)
    main = integrate_panels(f3, edges)
    tail = averaged_oscillatory_tail(f3, quad.r_max, r, rel_tol=quad.rel_tol,
                                     scale=max(abs(main), 1.0))
    return (main + tail) / (2.0 * math.pi ** 2 * r)


def _radial_points(s: np.ndarray, d: int) -> np.ndarray:
    pts = np.zeros((s.size, d))
    pts[:, 0] = s
    return pts


@dataclass
class PotentialDensity:
    """Cached radial evaluator of the symmetrized one-potential density."""

    source: ExponentVector
    quadrature: QuadratureSpec = field(default_factory=lambda: QuadratureSpec(
        r_max=400.0, n_nodes=2048, rel_tol=1e-8))
    parity_symmetrized: bool = True

    def __post_init__(self):
        _check_isotropic_1d(self.source)
        self._cache: dict[float, float] = {}

    def __call__(self, x) -> float:
        r = float(np.asarray(_radius(np.asarray(x, dtype=float), self.source.dim)).reshape(()))
        key = round(r, 14)
        if key not in self._cache:
            self._cache[key] = potential_density_v(self.source, _radial_points(
                np.array([r]), self.source.dim)[0], self.quadrature)
        return self._cache[key]

    def as_kernel(self) -> Kernel:
        """Expose v as a gauge with fourier = K (the defining transform)."""
        d = self.source.dim

        def ev(x):
            rr = np.atleast_1d(_radius(x, d))
            flat = np.array([self(_radial_points(np.array([ri]), d)[0])
                             for ri in rr.ravel()])
            return flat.reshape(rr.shape)

        return Kernel(eval=ev, dim=d, fourier=lambda xi: self.source.kernel_values(xi),
                      meta={"potential_density": True})


def kernel_sup_check(k: Kernel, samples, tol: float = 1e-9) -> bool:
    """True iff the kernel value at the origin dominates all sampled values.

    Kernels of positive type achieve their supremum at the origin; this is
    the numeric check of that statement on a finite sample.
    """
    origin = k.at(np.zeros(k.dim))
    if math.isinf(origin):
        return True
    pts = np.atleast_2d(np.asarray(samples, dtype=float))
    vals = k.eval(pts)
    return bool(origin >= np.max(vals) - tol)
