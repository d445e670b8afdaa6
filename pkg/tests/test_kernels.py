"""Kernels: Lambda closed form and brute force, Riesz constants, potentials."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from addlevy import (
    ExponentVector,
    IsotropicStable,
    BrownianIsotropic,
    PotentialDensity,
    Skewed1DStable,
    kernel_sup_check,
    lambda_bruteforce,
    lambda_closed,
    potential_density_v,
    riesz_constant,
    riesz_kernel,
    sector_constant,
)
from addlevy.kernels import Kernel, cauchy_kernel, exponential_kernel, gaussian_kernel


class TestLambdaClosed:
    def test_origin(self):
        # [TRIVIAL] the defining double integral degenerates to
        # (int e^{-|t|} dt)^2 = 4; the closed form gives 2 + 2
        assert lambda_closed(0.0) == pytest.approx(4.0)

    def test_one(self):
        # [DERIVED] 2*Re(1/2) + 2*(2^2 - 0)/2^4 = 1 + 1/2
        assert lambda_closed(1.0) == pytest.approx(1.5)

    def test_i(self):
        # [DERIVED] 2*(1/2) + 2*((1)^2 - 1)/|1+i|^4 = 1 + 0
        assert lambda_closed(1j) == pytest.approx(1.0)

    def test_negative_real_part_rejected(self):
        with pytest.raises(ValueError):
            lambda_closed(-0.5)

    @given(st.floats(min_value=0.0, max_value=5.0),
           st.floats(min_value=-5.0, max_value=5.0))
    @settings(max_examples=60, deadline=None)
    def test_upper_bound(self, re, im):
        # Lambda(z) <= 4 Re(1/(1+z)) whenever Re z >= 0
        z = complex(re, im)
        assert lambda_closed(z) <= 4.0 * (1.0 / (1.0 + z)).real + 1e-12

    @given(st.floats(min_value=0.0, max_value=5.0),
           st.floats(min_value=-5.0, max_value=5.0))
    @settings(max_examples=60, deadline=None)
    def test_positive(self, re, im):
        assert lambda_closed(complex(re, im)) > 0.0


class TestLambdaBruteforce:
    @pytest.mark.parametrize("z,expected", [
        (0.0 + 0.0j, 4.0),       # [TRIVIAL]
        (1.0 + 0.0j, 1.5),       # [DERIVED]
        (0.0 + 1.0j, 1.0),       # [DERIVED]
    ])
    def test_known_values(self, z, expected):
        assert lambda_bruteforce(z) == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("z", [2.0 + 1.0j, 0.3 - 2.5j, 4.0 + 4.0j])
    def test_matches_closed_form(self, z):
        # [DERIVED] the double integral and the closed form must agree
        assert lambda_bruteforce(z) == pytest.approx(lambda_closed(z), abs=1e-6)

    def test_sector_lower_bound(self):
        # With c = |Im z| / (1 + Re z) and R = Re(1/(1+z)) in [0, 1], the
        # closed form gives Lambda(z) = 2R + 2(1-c^2)R^2 exactly, hence
        # Lambda(z) >= 2(2-c^2) R^2 whenever the sector constant c < sqrt(2).
        for z in (1.0 + 0.5j, 2.0 + 1.0j, 0.5 + 0.2j, 0.0 + 1.0j):
            c = abs(z.imag) / (1.0 + z.real)
            assert c < math.sqrt(2.0)
            r = (1.0 / (1.0 + z)).real
            tight = 2.0 * r + 2.0 * (1.0 - c * c) * r * r
            assert lambda_closed(z) == pytest.approx(tight, rel=1e-12)
            assert lambda_closed(z) >= 2.0 * (2.0 - c * c) * r * r - 1e-12


class TestRieszConstant:
    def test_half_integral_on_line(self):
        # [DERIVED] c_{1,1/2} = sqrt(2 pi) (classical Riesz normalization)
        assert riesz_constant(1, 0.5) == pytest.approx(math.sqrt(2.0 * math.pi), rel=1e-8)

    def test_newtonian(self):
        # [DERIVED] c_{3,2} = 4 pi (Newtonian potential normalization)
        assert riesz_constant(3, 2.0) == pytest.approx(4.0 * math.pi, rel=1e-8)

    def test_positive(self):
        # [TRIVIAL] both sides of the calibration identity are positive
        for d, a in ((1, 0.3), (2, 1.0), (3, 1.5)):
            assert riesz_constant(d, a) > 0.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            riesz_constant(1, 1.5)


class TestPotentialDensity:
    PSI = ExponentVector((IsotropicStable(alpha=1.5, dim=1),))

    def test_cauchy_origin_diverges(self):
        # [DERIVED] K fails to be integrable (logarithmic tail) so v(0) = inf
        psi = ExponentVector((IsotropicStable(alpha=1.0, dim=1),))
        assert potential_density_v(psi, 0.0) == np.inf

    def test_brownian_origin(self):
        # [DERIVED] v(0) = (1/pi) int_0^inf dxi / (1 + xi^2/2) = sqrt(2)/2
        psi = ExponentVector((BrownianIsotropic(dim=1),))
        assert potential_density_v(psi, 0.0) == pytest.approx(math.sqrt(2.0) / 2.0, rel=1e-6)

    def test_supremum_at_origin(self):
        # kernels of positive type achieve their supremum at the origin
        v = PotentialDensity(self.PSI)
        assert v(0.0) < np.inf
        assert v(0.0) > v(1.0) > 0.0

    def test_even(self):
        # [TRIVIAL] symmetrization makes v even
        v = PotentialDensity(self.PSI)
        for x in (0.3, 1.0, 2.7):
            assert v(x) == pytest.approx(v(-x), rel=1e-12)

    def test_as_kernel_shapes(self):
        k = PotentialDensity(self.PSI).as_kernel()
        out = k.eval(np.zeros((2, 2, 1)))
        assert out.shape == (2, 2)


class TestKernelSupCheck:
    def test_riesz_true(self):
        # [TRIVIAL] value at 0 is +inf, trivially the supremum
        k = riesz_kernel(1, 0.5)
        assert kernel_sup_check(k, np.linspace(-3.0, 3.0, 31))

    def test_potential_density_true(self):
        k = PotentialDensity(ExponentVector((IsotropicStable(alpha=1.5, dim=1),))).as_kernel()
        assert kernel_sup_check(k, np.linspace(-3.0, 3.0, 13))

    def test_corrupted_false(self):
        # [TRIVIAL] negative control: dent the kernel at the origin
        base = exponential_kernel(1.0)

        def dented(x):
            vals = np.asarray(base.eval(x), dtype=float)
            r = np.atleast_1d(np.abs(np.asarray(x, dtype=float))).reshape(vals.shape)
            return np.where(r < 1e-9, 0.5 * vals, vals)

        k = Kernel(eval=dented, dim=1, fourier=base.fourier)
        assert not kernel_sup_check(k, np.linspace(-3.0, 3.0, 31))


class TestClosedFormKernels:
    @given(st.floats(min_value=-5.0, max_value=5.0))
    @settings(max_examples=30, deadline=None)
    def test_positive_transforms(self, xi):
        # positive-type gauges have nonnegative transforms
        for k in (exponential_kernel(1.0), gaussian_kernel(1.0), cauchy_kernel(1.0)):
            assert float(np.atleast_1d(k.fourier(np.array([xi])))[0]) >= 0.0
