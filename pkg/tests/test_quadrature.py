"""Panel quadrature building blocks."""
import math

import numpy as np
import pytest

from addlevy.quadrature import (
    QuadratureSpec,
    halfline_edges,
    integrate_panels,
    panel_nodes,
    powerlaw_tail,
)


class TestPanels:
    def test_polynomial_exact(self):
        # [TRIVIAL] Gauss-Legendre panels integrate low-degree polynomials
        edges = np.array([0.0, 0.5, 2.0])
        val = integrate_panels(lambda x: 3.0 * x ** 2, edges)
        assert val == pytest.approx(8.0, rel=1e-13)

    def test_decaying_exponential(self):
        # [DERIVED] int_0^R e^-x = 1 - e^-R
        edges = halfline_edges(30.0)
        val = integrate_panels(lambda x: np.exp(-x), edges)
        assert val == pytest.approx(1.0, rel=1e-10)

    def test_nodes_cover_panels(self):
        edges = np.array([0.0, 1.0, 3.0])
        nodes, weights = panel_nodes(edges, 6)
        assert nodes.min() > 0.0 and nodes.max() < 3.0
        assert weights.sum() == pytest.approx(3.0, rel=1e-13)


class TestTail:
    def test_powerlaw_tail_closed_form(self):
        # [DERIVED] int_R^inf A (x/R)^-p dx = A R / (p - 1)
        assert powerlaw_tail(2.0, 10.0, 3.0) == pytest.approx(10.0)

    def test_non_integrable_tail_is_infinite(self):
        # [TRIVIAL] decay <= 1 means the modeled tail diverges
        assert powerlaw_tail(1.0, 10.0, 0.5) == np.inf


class TestSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(r_max=-1.0)
        with pytest.raises(ValueError):
            QuadratureSpec(n_nodes=0)
