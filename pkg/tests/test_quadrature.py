"""Tests for the quadrature rules."""

import math
import unittest

import numpy as np
import pytest

from atomkit.quadrature import (
    QuadratureDomain,
    QuadratureRule,
    gauss_laguerre,
    gauss_legendre,
    sphere_rule,
)


class TestGaussLegendre(unittest.TestCase):
    """Tests for gauss_legendre."""

    def test_exact_polynomial(self):
        """Test exactness for degree 2n - 1 on a shifted interval."""
        rule = gauss_legendre(4, 0.0, 2.0)
        assert rule.degree == 7
        assert rule.integrate(lambda x: x ** 7) == pytest.approx(2.0 ** 8 / 8, rel=1e-14)

    def test_weights_sum_to_length(self):
        """Test that the weights add up to b - a."""
        rule = gauss_legendre(10, -3.0, 5.0)
        assert np.sum(rule.weights) == pytest.approx(8.0, rel=1e-14)
        assert rule.domain is QuadratureDomain.INTERVAL


class TestGaussLaguerre(unittest.TestCase):
    """Tests for gauss_laguerre."""

    def test_factorial_moments(self):
        """Test int r^k exp(-r) dr = k!."""
        rule = gauss_laguerre(6)
        for k in range(12):
            assert rule.integrate(lambda r: r ** k) == pytest.approx(math.factorial(k), rel=1e-12)

    def test_scaled_weight(self):
        """Test int r exp(-r/s) dr = s^2."""
        rule = gauss_laguerre(3, scale=2.5)
        assert rule.integrate(lambda r: r) == pytest.approx(6.25, rel=1e-13)


class TestSphereRule(unittest.TestCase):
    """Tests for sphere_rule."""

    def test_area(self):
        """Test that the weights add up to 4 pi."""
        assert np.sum(sphere_rule(6).weights) == pytest.approx(4 * math.pi, rel=1e-14)

    def test_node_shape(self):
        """Test the (2, n) layout of the nodes."""
        rule = sphere_rule(4)
        assert rule.nodes.shape == (2, 3 * 5)
        assert rule.domain is QuadratureDomain.SPHERE

    def test_cos_squared(self):
        """Test int cos^2(theta) dOmega = 4 pi / 3."""
        value = sphere_rule(2).integrate(lambda theta, phi: np.cos(theta) ** 2)
        assert value == pytest.approx(4 * math.pi / 3, rel=1e-14)

    def test_azimuthal_mode_vanishes(self):
        """Test that e^{i phi} sin(theta) integrates to zero."""
        value = sphere_rule(2).integrate(lambda t, p: np.sin(t) * np.exp(1j * p))
        assert abs(value) < 1e-14

    def test_negative_degree(self):
        """Test that a negative degree is rejected."""
        with pytest.raises(ValueError):
            sphere_rule(-1)


class TestQuadratureRule(unittest.TestCase):
    """Tests for QuadratureRule validation."""

    def test_non_positive_weights(self):
        """Test that zero weights are rejected."""
        with pytest.raises(ValueError):
            QuadratureRule(np.zeros(2), np.array([1.0, 0.0]), QuadratureDomain.INTERVAL, 1)
