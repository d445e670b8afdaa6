"""Exponent algebra: evaluation, product kernel, sector constants."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from addlevy import (
    BrownianIsotropic,
    ExponentVector,
    IsotropicStable,
    PureDrift,
    Skewed1DStable,
    SumOf,
    eval_exponent,
    k_psi,
    sector_constant,
)
from addlevy.exponents import DimensionMismatchError, exponent_from_json


class TestEvalExponent:
    def test_stable_at_origin_is_zero(self):
        # [TRIVIAL] Psi(0) = 0 for every Levy exponent
        assert eval_exponent(IsotropicStable(alpha=2.0, dim=1), 0.0) == 0.0

    def test_brownian_plane(self):
        # [TRIVIAL] Psi(xi) = ||xi||^2 / 2 at xi = (1, 1)
        val = eval_exponent(BrownianIsotropic(dim=2, diffusivity=1.0),
                            np.array([1.0, 1.0]))
        assert val == pytest.approx(1.0 + 0.0j, abs=1e-14)

    def test_skewed_stable(self):
        # [DERIVED] standard skewed-stable exponent at xi=1:
        # |xi|^a (1 - i b sign(xi) tan(pi a / 2)) = 1 - i tan(3 pi / 4) = 1 + i
        val = eval_exponent(Skewed1DStable(alpha=1.5, beta=1.0), 1.0)
        assert val == pytest.approx(1.0 + 1.0j, abs=1e-12)

    def test_isotropic_stable_scaling(self):
        # [DERIVED] Psi(xi) = (scale |xi|)^alpha
        val = eval_exponent(IsotropicStable(alpha=1.5, scale=2.0), 3.0)
        assert val == pytest.approx(6.0 ** 1.5, rel=1e-12)

    def test_pure_drift_imaginary(self):
        # [TRIVIAL] drift exponent is -i b.xi
        val = eval_exponent(PureDrift(dim=1, b=(3.0,)), 2.0)
        assert val.real == 0.0
        assert val.imag == pytest.approx(-6.0)

    def test_sum_of_adds(self):
        # [TRIVIAL] exponents of independent summands add
        parts = (IsotropicStable(alpha=2.0), PureDrift(b=(1.0,)))
        total = eval_exponent(SumOf(dim=1, components=parts), 1.5)
        expected = sum(eval_exponent(p, 1.5) for p in parts)
        assert total == pytest.approx(expected, abs=1e-14)

    def test_dimension_mismatch_raises(self):
        with pytest.raises(DimensionMismatchError):
            eval_exponent(BrownianIsotropic(dim=2), np.array([1.0, 2.0, 3.0]))

    @given(st.floats(min_value=-50.0, max_value=50.0),
           st.floats(min_value=0.1, max_value=2.0))
    @settings(max_examples=50, deadline=None)
    def test_conjugate_symmetry(self, xi, alpha):
        # Psi(-xi) = conj(Psi(xi)) for every Levy exponent
        beta = 0.0 if abs(alpha - 1.0) < 0.05 or alpha > 1.99 else 0.5
        exp = Skewed1DStable(alpha=min(alpha, 2.0), beta=beta)
        a = eval_exponent(exp, xi)
        b = eval_exponent(exp, -xi)
        assert b == pytest.approx(np.conj(a), abs=1e-10)

    @given(st.floats(min_value=-50.0, max_value=50.0))
    @settings(max_examples=50, deadline=None)
    def test_nonnegative_real_part(self, xi):
        for exp in (IsotropicStable(alpha=1.3), BrownianIsotropic(),
                    Skewed1DStable(alpha=1.7, beta=-0.8)):
            assert eval_exponent(exp, xi).real >= -1e-12


class TestKPsi:
    def test_single_brownian_origin(self):
        # [TRIVIAL] Psi(0)=0 so every factor is 1
        psi = ExponentVector((BrownianIsotropic(dim=1),))
        assert k_psi(psi, np.zeros(1)) == pytest.approx(1.0)

    def test_two_cauchy_quarter(self):
        # [TRIVIAL] each factor Re 1/(1+|1|) = 1/2, product 0.25
        psi = ExponentVector((IsotropicStable(alpha=1.0, dim=1),
                              IsotropicStable(alpha=1.0, dim=1)))
        assert k_psi(psi, 1.0) == pytest.approx(0.25)

    def test_cauchy_with_drift(self):
        # [DERIVED] Psi(1) = 1 - i, factor Re 1/(2 - i) = 2/5
        psi = ExponentVector((SumOf(dim=1, components=(
            IsotropicStable(alpha=1.0), PureDrift(b=(1.0,)))),))
        assert k_psi(psi, np.array([1.0])) == pytest.approx(0.4)

    @given(st.floats(min_value=-20.0, max_value=20.0))
    @settings(max_examples=50, deadline=None)
    def test_values_in_unit_interval(self, xi):
        # K_Psi = prod Re(1/(1+Psi_j)) lies in (0, 1] for these families
        psi = ExponentVector((IsotropicStable(alpha=1.5, dim=1),
                              BrownianIsotropic(dim=1)))
        assert 0.0 < k_psi(psi, xi) <= 1.0 + 1e-12


class TestSectorConstant:
    GRID = (-100.0, -10.0, -1.0, 1.0, 10.0, 100.0)

    def test_symmetric_is_zero(self):
        # [TRIVIAL] Im Psi = 0 identically
        assert sector_constant(IsotropicStable(alpha=1.5), self.GRID) == 0.0

    def test_skewed_ratio(self):
        # [DERIVED] |Im Psi| / (1 + Re Psi) -> |tan(3 pi / 4)| = 1 as xi grows
        val = sector_constant(Skewed1DStable(alpha=1.5, beta=1.0), self.GRID)
        assert val == pytest.approx(1.0, rel=1e-2)

    def test_pure_drift_fails_sector(self):
        # [DERIVED] Re = 0 so the ratio blows up; measured on {1} it is 3/1
        val = sector_constant(PureDrift(b=(3.0,)), (1.0,))
        assert val == pytest.approx(3.0) or math.isinf(val)


class TestJsonRoundTrip:
    @pytest.mark.parametrize("exp", [
        IsotropicStable(dim=2, alpha=1.3, scale=0.7),
        BrownianIsotropic(dim=3, diffusivity=2.0),
        Skewed1DStable(alpha=0.9, beta=-0.4, scale=1.1),
        PureDrift(dim=2, b=(1.0, -2.0)),
        SumOf(dim=1, components=(IsotropicStable(alpha=1.0), PureDrift(b=(1.0,)))),
    ])
    def test_round_trip(self, exp):
        assert exponent_from_json(exp.to_json()) == exp

    def test_unknown_family_rejected(self):
        with pytest.raises(ValueError, match="family"):
            exponent_from_json({"family": "Nope", "dim": 1, "params": {}})


class TestValidation:
    def test_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            IsotropicStable(alpha=3.0)

    def test_alpha_zero(self):
        with pytest.raises(ValueError):
            IsotropicStable(alpha=0.0)

    def test_beta_out_of_range(self):
        with pytest.raises(ValueError):
            Skewed1DStable(alpha=1.5, beta=1.5)

    def test_vector_mixed_dims_rejected(self):
        with pytest.raises(DimensionMismatchError):
            ExponentVector((IsotropicStable(dim=2), BrownianIsotropic(dim=3)))

    def test_vector_shape(self):
        psi = ExponentVector((IsotropicStable(dim=2), BrownianIsotropic(dim=2)))
        assert psi.n == 2 and psi.dim == 2
