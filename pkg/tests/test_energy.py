"""Energy functionals: real-side, Fourier-side, and the identity bridges."""
import math

import numpy as np
import pytest
from scipy import integrate
from hypothesis import given, settings, strategies as st

from addlevy import (
    BrownianIsotropic,
    ExponentVector,
    IsotropicStable,
    energy_fourier,
    energy_identity_check,
    lambda_closed,
    mutual_energy_real,
    riesz_constant,
    riesz_kernel,
    sojourn_second_moment,
)
from addlevy.energy import riesz_identity_sides
from addlevy.kernels import Kernel, cauchy_kernel, exponential_kernel
from addlevy.measures import cell_width, cube_grid, delta, discretize, two_point

UNIFORM_HALF_ENERGY = 8.0 / 3.0  # int_0^1 int_0^1 |x-y|^{-1/2} dx dy


class TestMutualEnergyReal:
    def test_constant_kernel(self):
        # [TRIVIAL] kappa == 1 and probability measures give exactly 1
        ones = Kernel(eval=lambda x: np.ones(np.asarray(x, dtype=float).shape[:-1]
                                             if np.asarray(x).ndim > 1 else
                                             np.shape(np.atleast_1d(x))), dim=1)
        mu = discretize(cube_grid([(0.0, 1.0)], 8))
        assert mutual_energy_real(ones, mu, mu) == pytest.approx(1.0)

    def test_riesz_uniform_off_diagonal(self):
        # [DERIVED] continuum value 2/((1-s)(2-s)) = 8/3 at s = 1/2.
        # Dropping the diagonal loses the within-cell mass, an O(n^{s-1})
        # deficit (about 4.4% at n=512), so the estimate sits just below.
        mu = discretize(cube_grid([(0.0, 1.0)], 512))
        k = riesz_kernel(1, 0.5)
        val = mutual_energy_real(k, mu, mu, drop_diagonal=True)
        assert UNIFORM_HALF_ENERGY * 0.95 < val < UNIFORM_HALF_ENERGY

    def test_delta_diagonal_infinite(self):
        # [TRIVIAL] kappa(0) = +inf on the diagonal atom
        mu = delta([0.0])
        assert mutual_energy_real(riesz_kernel(1, 0.5), mu, mu) == np.inf

    def test_symmetric_in_arguments(self):
        k = exponential_kernel(1.0)
        mu = discretize(cube_grid([(0.0, 1.0)], 8))
        nu = discretize(two_point(1.0))
        assert mutual_energy_real(k, mu, nu) == pytest.approx(
            mutual_energy_real(k, nu, mu), rel=1e-12)


class TestEnergyFourier:
    def test_brownian_delta(self):
        # [DERIVED] (1/2pi) int dxi / (1 + xi^2/2) = 1/sqrt(2)
        psi = ExponentVector((BrownianIsotropic(dim=1),))
        rep = energy_fourier(psi, delta([0.0]))
        assert rep.converged
        assert rep.value == pytest.approx(math.sqrt(0.5), rel=1e-6)

    def test_cauchy_delta_diverges(self):
        # [DERIVED] logarithmic tail: flagged divergent, value +inf
        psi = ExponentVector((IsotropicStable(alpha=1.0, dim=1),))
        rep = energy_fourier(psi, delta([0.0]))
        assert not rep.converged
        assert rep.value == np.inf

    @given(st.floats(min_value=-3.0, max_value=3.0))
    @settings(max_examples=10, deadline=None)
    def test_translation_invariance(self, a):
        # [TRIVIAL] |mu_hat| is unchanged by translation
        psi = ExponentVector((IsotropicStable(alpha=1.5, dim=1),))
        base = discretize(two_point(1.0))
        shifted = type(base)(points=base.points + a, weights=base.weights)
        v0 = energy_fourier(psi, base).value
        v1 = energy_fourier(psi, shifted).value
        assert v1 == pytest.approx(v0, abs=1e-10)

    def test_energy_positive(self):
        psi = ExponentVector((IsotropicStable(alpha=1.5, dim=1),))
        mu = discretize(cube_grid([(0.0, 1.0)], 16))
        assert energy_fourier(psi, mu).value > 0.0


class TestIdentityChecks:
    def test_delta_nu_reduces_to_single_measure_identity(self):
        # [DERIVED] nu = delta_0: E_kappa(mu) vs (2pi)^-d int kappa_hat |mu_hat|^2
        k = exponential_kernel(1.0)
        mu = discretize(cube_grid([(0.0, 1.0)], 64))
        real, fourier = energy_identity_check(k, delta([0.0]), mu)
        assert real == pytest.approx(fourier, rel=0.01)

    def test_two_point_measures(self):
        # [DERIVED] both sides by independent quadrature for a smooth gauge
        k = cauchy_kernel(1.0)
        mu = discretize(two_point(1.0))
        nu = discretize(two_point(0.5))
        real, fourier = energy_identity_check(k, nu, mu)
        assert real == pytest.approx(fourier, rel=0.01)

    def test_double_delta_gives_kernel_at_zero(self):
        # [TRIVIAL] point masses collapse both sides to kappa(0)
        k = exponential_kernel(1.0)
        real, fourier = energy_identity_check(k, delta([0.0]), delta([0.0]))
        k0 = float(np.atleast_1d(k.eval(np.array([0.0])))[0])
        assert real == pytest.approx(k0, rel=1e-9)
        assert fourier == pytest.approx(k0, rel=0.01)


class TestRieszIdentity:
    def test_uniform_interval(self):
        # [DERIVED] real side ~ 8/3 and matches the c_{d,alpha}-weighted
        # Fourier side
        spec = cube_grid([(0.0, 1.0)], 512)
        mu = discretize(spec)
        real, fourier = riesz_identity_sides(mu, 0.5, cell_width(spec))
        assert real == pytest.approx(UNIFORM_HALF_ENERGY, rel=0.02)
        assert real == pytest.approx(fourier, rel=0.02)


class TestSojournSecondMoment:
    def test_matches_direct_quadrature(self):
        # [DERIVED] independent oracle: (1/4)(2pi)^-1 int |f_hat|^2
        # Lambda(Psi(xi)) dxi for a standard Gaussian density
        alpha = 1.5
        psi = ExponentVector((IsotropicStable(alpha=alpha, dim=1),))
        fhat = lambda xi: np.exp(-0.5 * np.asarray(xi) ** 2)
        val = sojourn_second_moment(psi, fhat)
        oracle = 0.25 / (2.0 * math.pi) * integrate.quad(
            lambda x: math.exp(-x * x) * lambda_closed(abs(x) ** alpha),
            -np.inf, np.inf)[0]
        assert val == pytest.approx(oracle, rel=1e-6)

    def test_bounded_by_energy(self):
        # the sojourn norm is dominated by the energy I_Psi of the density:
        # Lambda(z) <= 4 Re(1/(1+z)) factorwise gives 4^-N prod Lambda <=
        # prod Re(1/(1+Psi_j))
        rng = np.random.default_rng(0)
        for _ in range(5):
            alpha = float(rng.uniform(0.5, 2.0))
            psi = ExponentVector((IsotropicStable(alpha=alpha, dim=1),))
            fhat = lambda xi: np.exp(-0.5 * np.asarray(xi) ** 2)
            second = sojourn_second_moment(psi, fhat)
            energy = (1.0 / (2.0 * math.pi)) * integrate.quad(
                lambda x: math.exp(-x * x) / (1.0 + abs(x) ** alpha),
                -np.inf, np.inf)[0]
            assert second <= energy + 1e-12
